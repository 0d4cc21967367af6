#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "floodpulse/dates.hpp"
#include "floodpulse/errors.hpp"
#include "floodpulse/rainfall.hpp"
#include "floodpulse/social.hpp"

namespace floodpulse::detect {

struct DetectionEvent {
  Date date{};
  double z_peak = 0;
  double proxy_value = 0;
  std::string source_series;
};

struct DetectorConfig {
  int window = 14;       // baseline observations preceding the candidate
  double z_threshold = 3.0;
  int refractory = 5;    // min days since the previous event
};

namespace detail {

struct Observation {
  Date date{};
  double value = 0;
};

inline std::pair<double, double> mean_sigma(std::span<const Observation> window) {
  double mean = 0;
  for (const auto& o : window) mean += o.value;
  mean /= double(window.size());
  double var = 0;
  for (const auto& o : window) var += (o.value - mean) * (o.value - mean);
  var /= double(window.size());
  return {mean, std::sqrt(var)};
}

// Rolling-baseline z peaks over an observation sequence: the baseline is the
// previous `window` observations, the candidate must be a local maximum, and
// events must be more than `refractory` days apart.
inline std::vector<DetectionEvent> peaks_over(std::span<const Observation> obs,
                                              const DetectorConfig& cfg,
                                              const std::string& series_name) {
  if (cfg.window < 3) throw InvalidParameter("baseline window must be >= 3");
  if (!(cfg.z_threshold > 0)) throw InvalidParameter("z threshold must be > 0");
  if (cfg.refractory < 0) throw InvalidParameter("refractory must be >= 0");

  std::vector<DetectionEvent> events;
  const std::size_t w = std::size_t(cfg.window);
  for (std::size_t i = w; i < obs.size(); ++i) {
    const auto [mean, sigma] = mean_sigma(obs.subspan(i - w, w));
    if (!(sigma > 0)) continue;
    const double z = (obs[i].value - mean) / sigma;
    if (z < cfg.z_threshold) continue;
    if (obs[i].value < obs[i - 1].value) continue;
    if (i + 1 < obs.size() && obs[i].value < obs[i + 1].value) continue;
    if (!events.empty() && (obs[i].date - events.back().date).count() <= cfg.refractory) continue;
    events.push_back({obs[i].date, z, obs[i].value, series_name});
  }
  return events;
}

}  // namespace detail

/// Detects rolling-z peaks in a proxy series. Flagged dates are skipped, and
/// so are dates with fewer than `window` prior observations.
inline std::vector<DetectionEvent> detect_peaks(const social::ProxySeries& series,
                                                const DetectorConfig& cfg = {}) {
  std::vector<detail::Observation> obs;
  obs.reserve(series.entries.size());
  for (const auto& e : series.entries)
    if (!e.missing_denominator) obs.push_back({e.date, e.value});
  return detail::peaks_over(obs, cfg, series.name);
}

enum class FloodKind { Torrential, Overflow };

inline const char* flood_kind_name(FloodKind k) {
  return k == FloodKind::Torrential ? "torrential" : "overflow";
}

struct FloodClass {
  FloodKind kind = FloodKind::Overflow;
  std::optional<int> rainfall_lag_days;  // rain peak date - event date, torrential only
};

struct ClassifierConfig {
  int tolerance_days = 2;
  double rain_z_threshold = 3.0;
  int window = 14;  // rainfall baseline, same mechanics as the detector
};

/// Torrential when a rainfall z-peak lands within +-tolerance of the event;
/// otherwise overflow. Missing rainfall always classifies as overflow.
inline FloodClass classify_flood(const DetectionEvent& event,
                                 const rainfall::RainfallSeries& rain,
                                 const ClassifierConfig& cfg = {}) {
  if (rain.entries.empty()) return {FloodKind::Overflow, std::nullopt};

  std::vector<detail::Observation> obs;
  obs.reserve(rain.entries.size());
  for (const auto& [date, mm] : rain.entries) obs.push_back({date, mm});
  DetectorConfig rain_cfg{cfg.window, cfg.rain_z_threshold, 0};
  const auto rain_peaks = detail::peaks_over(obs, rain_cfg, "rainfall");

  std::optional<int> best_lag;
  for (const auto& peak : rain_peaks) {
    const int lag = int((peak.date - event.date).count());
    if (std::abs(lag) > cfg.tolerance_days) continue;
    if (!best_lag || std::abs(lag) < std::abs(*best_lag)) best_lag = lag;
  }
  if (best_lag) return {FloodKind::Torrential, best_lag};
  return {FloodKind::Overflow, std::nullopt};
}

enum class Stage { Idle, Warning, Escalated, Monitoring, Evaluation };

inline const char* stage_name(Stage s) {
  switch (s) {
    case Stage::Idle: return "IDLE";
    case Stage::Warning: return "WARNING";
    case Stage::Escalated: return "ESCALATED";
    case Stage::Monitoring: return "MONITORING";
    default: return "EVALUATION";
  }
}

struct EscalationState {
  Stage stage = Stage::Idle;
  Date entered_at{};
  std::optional<DetectionEvent> event;          // most recent triggering event
  std::optional<social::EvidenceBundle> evidence;
};

enum class RequestKind { HourlyPresenceWindow, SatelliteTasking, SocioeconomicData };

inline const char* request_kind_name(RequestKind k) {
  switch (k) {
    case RequestKind::HourlyPresenceWindow: return "hourly_presence_window";
    case RequestKind::SatelliteTasking: return "satellite_tasking";
    default: return "socioeconomic_data";
  }
}

/// Escalation artifact: a request for high-granularity data carrying the
/// evidence that justifies it.
struct DataRequest {
  RequestKind kind = RequestKind::HourlyPresenceWindow;
  social::SpatialProxy region;
  DateRange window;
  social::EvidenceBundle evidence;
};

struct EscalationConfig {
  int quiescence_days = 14;
  int hourly_span_days = 3;       // hourly window: event +- span
  int satellite_horizon_days = 14;  // satellite window: event .. event + horizon
};

/// One step of input for the state machine. Exactly one of the optional
/// stimuli should be set; an empty input is a clock tick carrying
/// quiescent_days.
struct EscalationInput {
  std::optional<DetectionEvent> event;
  std::optional<social::EvidenceBundle> evidence;
  int quiescent_days = 0;
  bool data_registered = false;
  bool report_issued = false;
};

struct StepResult {
  EscalationState state;
  std::vector<DataRequest> requests;
};

/// Deterministic reducer over the stage machine:
///   IDLE -(event)-> WARNING
///   WARNING -(complete evidence)-> ESCALATED   [hourly + satellite requests]
///   ESCALATED -(data registered)-> MONITORING
///   MONITORING -(tick, quiescent >= Q)-> EVALUATION   [socioeconomic request]
///   EVALUATION -(report issued)-> IDLE
/// A new event from any stage returns to WARNING. Inputs a stage cannot
/// consume raise InvalidTransition.
inline StepResult escalate(const EscalationState& state, const EscalationInput& input,
                           const EscalationConfig& cfg = {}) {
  StepResult out{state, {}};

  if (input.event) {
    out.state.stage = Stage::Warning;
    out.state.entered_at = input.event->date;
    out.state.event = input.event;
    out.state.evidence.reset();
    return out;
  }

  switch (state.stage) {
    case Stage::Idle:
      if (input.evidence || input.data_registered || input.report_issued)
        throw InvalidTransition("IDLE consumes only detection events");
      return out;  // tick

    case Stage::Warning: {
      if (input.data_registered || input.report_issued)
        throw InvalidTransition("WARNING consumes evidence or a new event");
      if (!input.evidence) return out;  // tick
      // the machine owns the event identity: pin the bundle's temporal
      // section to the event that opened this WARNING
      social::EvidenceBundle evidence = *input.evidence;
      if (state.event)
        evidence.temporal = social::TemporalEvidence{state.event->date, state.event->z_peak};
      out.state.evidence = evidence;
      if (!evidence.complete()) return out;  // hold until evidence is complete
      const Date d = state.event ? state.event->date : state.entered_at;
      out.state.stage = Stage::Escalated;
      out.state.entered_at = d;
      const auto& region = *evidence.spatial;
      out.requests.push_back({RequestKind::HourlyPresenceWindow, region,
                              {d - Days(cfg.hourly_span_days), d + Days(cfg.hourly_span_days)},
                              evidence});
      out.requests.push_back({RequestKind::SatelliteTasking, region,
                              {d, d + Days(cfg.satellite_horizon_days)},
                              evidence});
      return out;
    }

    case Stage::Escalated:
      if (input.evidence || input.report_issued)
        throw InvalidTransition("ESCALATED consumes data registration or a new event");
      if (!input.data_registered) return out;  // tick
      out.state.stage = Stage::Monitoring;
      return out;

    case Stage::Monitoring: {
      if (input.evidence || input.data_registered || input.report_issued)
        throw InvalidTransition("MONITORING consumes ticks or a new event");
      if (input.quiescent_days < cfg.quiescence_days) return out;
      const Date d = state.event ? state.event->date : state.entered_at;
      out.state.stage = Stage::Evaluation;
      out.state.entered_at = d + Days(input.quiescent_days);
      if (state.evidence && state.evidence->spatial)
        out.requests.push_back({RequestKind::SocioeconomicData, *state.evidence->spatial,
                                {d, d + Days(input.quiescent_days)}, *state.evidence});
      return out;
    }

    case Stage::Evaluation:
      if (input.evidence || input.data_registered)
        throw InvalidTransition("EVALUATION consumes the issued report or a new event");
      if (!input.report_issued) return out;  // tick
      out.state.stage = Stage::Idle;
      out.state.event.reset();
      out.state.evidence.reset();
      return out;
  }
  throw InvalidTransition("unknown stage");
}

}  // namespace floodpulse::detect
