#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "floodpulse/dates.hpp"
#include "floodpulse/errors.hpp"
#include "floodpulse/geo.hpp"
#include "floodpulse/presence.hpp"
#include "floodpulse/text.hpp"

namespace floodpulse::social {

enum class Gender { Female, Male, Unknown };

inline std::optional<Gender> parse_gender(std::string_view s) {
  if (s == "f") return Gender::Female;
  if (s == "m") return Gender::Male;
  if (s == "u") return Gender::Unknown;
  return std::nullopt;
}

inline const char* gender_code(Gender g) {
  switch (g) {
    case Gender::Female: return "f";
    case Gender::Male: return "m";
    default: return "u";
  }
}

struct SocialPost {
  std::string id;
  Timestamp ts;
  std::string text;
  std::string author_id;
  Gender gender = Gender::Unknown;
  std::optional<geo::GeoPoint> geo;
  std::string platform;
};

/// Keyword set per language code. Keywords are stored folded (composed +
/// lowercased) so membership tests reduce to token lookups.
struct Lexicon {
  std::map<std::string, std::set<std::string>> by_language;

  const std::set<std::string>& for_language(const std::string& lang) const {
    auto it = by_language.find(lang);
    if (it == by_language.end() || it->second.empty())
      throw UnknownLanguage("no keywords for language '" + lang + "'");
    return it->second;
  }

  static Lexicon from_raw(std::map<std::string, std::vector<std::string>> raw) {
    Lexicon lx;
    for (auto& [lang, words] : raw) {
      auto& set = lx.by_language[lang];
      for (auto& w : words) set.insert(text::fold(w));
    }
    return lx;
  }

  static Lexicon default_awareness() {
    return from_raw({{"en", {"flood", "weather", "rain", "water", "river"}},
                     {"es", {"inundación", "clima", "tiempo", "lluvia", "agua", "río"}},
                     {"fr", {"inondation", "météo", "pluie", "eau", "rivière", "fleuve"}}});
  }

  static Lexicon default_damage() {
    return from_raw({{"en", {"insurance", "property", "damage"}},
                     {"es", {"seguro", "propiedad", "daño", "daños"}},
                     {"fr", {"assurance", "propriété", "dommage", "dégât", "dégâts"}}});
  }
};

/// Append-only corpus keyed by post id; duplicate ids are rejected.
class PostStore {
 public:
  bool insert(SocialPost post) {
    if (post.id.empty()) throw InvalidParameter("post id must not be empty");
    if (!ids_.insert(post.id).second) return false;
    posts_.push_back(std::move(post));
    return true;
  }
  std::span<const SocialPost> posts() const { return posts_; }
  std::size_t size() const { return posts_.size(); }

 private:
  std::vector<SocialPost> posts_;
  std::set<std::string> ids_;
};

/// Posts whose text contains at least one lexicon keyword as a whole word.
inline std::vector<SocialPost> keyword_filter(std::span<const SocialPost> posts,
                                              const Lexicon& lexicon, const std::string& lang) {
  const auto& keywords = lexicon.for_language(lang);
  std::vector<SocialPost> out;
  for (const auto& p : posts)
    if (text::contains_any_keyword(p.text, keywords)) out.push_back(p);
  return out;
}

struct ProxyEntry {
  Date date{};
  double value = 0;
  bool missing_denominator = false;
};

struct ProxySeries {
  std::string name;
  std::vector<ProxyEntry> entries;  // strictly increasing dates
};

/// Daily post counts over the range. With a bounding box, only geotagged
/// posts inside it count; without one, geolocation is ignored. Dates with no
/// post are emitted as zero.
inline ProxySeries daily_counts(std::span<const SocialPost> posts,
                                const std::optional<geo::BoundingBox>& bbox, DateRange range,
                                std::string name = "daily_counts") {
  if (range.end < range.start) throw InvalidRange("inverted date range");
  std::map<Date, double> counts;
  for (const auto& p : posts) {
    if (bbox) {
      if (!p.geo || !bbox->contains(*p.geo)) continue;
    }
    const Date d = p.ts.day();
    if (range.contains(d)) counts[d] += 1;
  }
  ProxySeries out{std::move(name), {}};
  for (Date d = range.start; d <= range.end; d += Days(1)) {
    auto it = counts.find(d);
    out.entries.push_back({d, it == counts.end() ? 0.0 : it->second, false});
  }
  return out;
}

/// (flood_t / total_t) * (social_users / census_t). A zero or missing
/// denominator yields 0 flagged missing_denominator.
inline ProxySeries normalize_awareness(const ProxySeries& flood, const ProxySeries& total,
                                       double social_users, const presence::DaySeries& census) {
  if (!(social_users > 0)) throw InvalidParameter("social_users must be > 0");
  if (flood.entries.size() != total.entries.size())
    throw InvalidParameter("series do not share the date range");
  std::map<Date, double> census_by_date(census.entries.begin(), census.entries.end());

  ProxySeries out{"normalized_awareness", {}};
  for (std::size_t i = 0; i < flood.entries.size(); ++i) {
    const auto& f = flood.entries[i];
    const auto& t = total.entries[i];
    if (f.date != t.date) throw InvalidParameter("series do not share the date range");
    auto c = census_by_date.find(f.date);
    if (t.value == 0 || c == census_by_date.end() || c->second == 0) {
      out.entries.push_back({f.date, 0.0, true});
      continue;
    }
    out.entries.push_back({f.date, (f.value / t.value) * (social_users / c->second), false});
  }
  return out;
}

inline ProxySeries awareness_series(std::span<const SocialPost> posts, const Lexicon& lexicon,
                                    const std::string& lang,
                                    const std::optional<geo::BoundingBox>& bbox, DateRange range) {
  return daily_counts(keyword_filter(posts, lexicon, lang), bbox, range, "awareness");
}

inline ProxySeries damage_series(std::span<const SocialPost> posts, const Lexicon& lexicon,
                                 const std::string& lang,
                                 const std::optional<geo::BoundingBox>& bbox, DateRange range) {
  return daily_counts(keyword_filter(posts, lexicon, lang), bbox, range, "damage");
}

/// Footprint of the geotagged matches: bounding box always, convex hull when
/// at least three non-collinear geotagged posts exist.
struct SpatialProxy {
  geo::BoundingBox bbox;
  std::optional<geo::RingPolygon> hull;
};

inline std::optional<SpatialProxy> spatial_proxy(std::span<const SocialPost> matches) {
  std::vector<geo::GeoPoint> pts;
  for (const auto& p : matches)
    if (p.geo) pts.push_back(*p.geo);
  if (pts.empty()) return std::nullopt;
  SpatialProxy out{geo::BoundingBox::of(pts), std::nullopt};
  try {
    out.hull = geo::convex_hull(pts);
  } catch (const DegenerateHull&) {
    // fewer than 3 distinct points, or collinear: bbox only
  }
  return out;
}

/// Distinct authors and their gender histogram (female, male, unknown).
struct SocialProxy {
  std::size_t distinct_users = 0;
  std::array<std::size_t, 3> gender_counts{};  // f, m, u

  std::size_t histogram_total() const {
    return gender_counts[0] + gender_counts[1] + gender_counts[2];
  }
};

inline SocialProxy social_proxy(std::span<const SocialPost> matches) {
  std::map<std::string, Gender> users;
  for (const auto& p : matches) {
    auto [it, fresh] = users.emplace(p.author_id, p.gender);
    if (!fresh && it->second == Gender::Unknown) it->second = p.gender;
  }
  SocialProxy out;
  out.distinct_users = users.size();
  for (const auto& [id, g] : users) ++out.gender_counts[std::size_t(g)];
  return out;
}

struct TemporalEvidence {
  Date event_date{};
  double peak_z = 0;
};

/// The temporal, spatial and social proxies attached to a data request.
struct EvidenceBundle {
  std::optional<TemporalEvidence> temporal;
  std::optional<SpatialProxy> spatial;
  std::optional<SocialProxy> social;

  bool complete() const { return temporal && spatial && social; }
};

inline EvidenceBundle build_evidence(Date event_date, double peak_z,
                                     std::span<const SocialPost> matches) {
  EvidenceBundle b;
  b.temporal = TemporalEvidence{event_date, peak_z};
  b.spatial = spatial_proxy(matches);
  b.social = social_proxy(matches);
  return b;
}

}  // namespace floodpulse::social
