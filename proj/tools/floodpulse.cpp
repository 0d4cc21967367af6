// floodpulse CLI: dataset validation, end-to-end runs, synthetic scenario
// generation and per-stage exports.
//
// Exit codes: 0 success, 1 validation failure, 2 runtime error.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "floodpulse/floodpulse.hpp"

namespace fs = std::filesystem;
using floodpulse::pipeline::RunConfig;

namespace {

void print_validation(const floodpulse::pipeline::ValidationReport& report) {
  for (const auto& fr : report.files) {
    std::printf("%-16s %-40s ", fr.label.c_str(), fr.path.empty() ? "-" : fr.path.c_str());
    if (!fr.failure.empty()) {
      std::printf("FAIL (%s)\n", fr.failure.c_str());
    } else {
      std::printf("ok  rows=%zu accepted=%zu rejected=%zu\n", fr.total, fr.accepted,
                  fr.total - fr.accepted);
    }
    for (const auto& rej : fr.rejects) {
      if (rej.line)
        std::printf("    line %zu: %s\n", rej.line, rej.reason.c_str());
      else
        std::printf("    %s\n", rej.reason.c_str());
    }
  }
  std::printf("validation: %s\n", report.ok ? "PASS" : "FAIL");
}

int write_document(const nlohmann::json& doc, const fs::path& out_dir, const char* label) {
  floodpulse::io::write_file(out_dir / (std::string(label) + ".json"), doc.dump(2) + "\n");
  const auto written = floodpulse::pipeline::export_from_json(doc, out_dir);
  std::printf("wrote %zu files under %s\n", written.size() + 1, out_dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-source flood detection and impact quantification"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed_override;
  std::string report_path;

  auto add_common = [&](CLI::App* cmd, bool needs_config = true) {
    auto* opt = cmd->add_option("--config", config_path, "configuration file (JSON)");
    if (needs_config) opt->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed_override, "override the configured seed");
  };

  auto* cmd_validate = app.add_subcommand("validate", "schema-check every configured input");
  add_common(cmd_validate);
  auto* cmd_run = app.add_subcommand("run", "full pipeline run with exports");
  add_common(cmd_run);
  auto* cmd_generate = app.add_subcommand("generate", "generate a synthetic scenario dataset");
  add_common(cmd_generate);
  auto* cmd_segment = app.add_subcommand("segment", "flood extent, draping and population");
  add_common(cmd_segment);
  auto* cmd_presence = app.add_subcommand("presence", "presence aggregation and z-score map");
  add_common(cmd_presence);
  auto* cmd_proxies = app.add_subcommand("proxies", "social media and rainfall proxy series");
  add_common(cmd_proxies);
  auto* cmd_network = app.add_subcommand("network", "interaction network profiling");
  add_common(cmd_network);
  auto* cmd_export = app.add_subcommand("export", "re-export files from a saved report");
  cmd_export->add_option("--report", report_path, "report.json produced by `run`")->required();
  cmd_export->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the message or the help text
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_generate->parsed()) {
      auto spec = floodpulse::scenario::load_scenario(config_path);
      if (seed_override) spec.seed = *seed_override;
      const auto files = floodpulse::scenario::generate_scenario(spec, out_dir);
      std::printf("scenario written: %s\n", files.config.string().c_str());
      std::printf("run it with: floodpulse run --config %s\n", files.config.string().c_str());
      return 0;
    }

    if (cmd_export->parsed()) {
      const auto doc =
          nlohmann::json::parse(floodpulse::io::read_file(report_path), nullptr, false);
      if (doc.is_discarded()) throw floodpulse::CorruptInput("report is not valid JSON");
      const auto written = floodpulse::pipeline::export_from_json(doc, out_dir);
      std::printf("wrote %zu files under %s\n", written.size(), out_dir.c_str());
      return 0;
    }

    RunConfig cfg = floodpulse::pipeline::load_config(config_path);
    if (seed_override) cfg.seed = *seed_override;

    if (cmd_validate->parsed()) {
      const auto report = floodpulse::pipeline::validate_inputs(cfg);
      print_validation(report);
      return report.ok ? 0 : 1;
    }
    if (cmd_run->parsed()) {
      const auto report = floodpulse::pipeline::run_and_export(cfg, out_dir);
      std::printf("%s", floodpulse::io::read_file(fs::path(out_dir) / "summary.txt").c_str());
      return 0;
    }
    if (cmd_segment->parsed())
      return write_document(floodpulse::pipeline::segment_document(cfg), out_dir, "segment");
    if (cmd_presence->parsed())
      return write_document(floodpulse::pipeline::presence_document(cfg), out_dir, "presence");
    if (cmd_proxies->parsed())
      return write_document(floodpulse::pipeline::proxies_document(cfg), out_dir, "proxies");
    if (cmd_network->parsed())
      return write_document(floodpulse::pipeline::network_document(cfg), out_dir, "network");
  } catch (const floodpulse::MissingInput& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const floodpulse::CorruptInput& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
