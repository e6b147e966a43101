#include "cli.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>

#include <CLI11.hpp>

#include "docgen/clipbank.hpp"
#include "docgen/export.hpp"
#include "docgen/generator.hpp"
#include "docgen/service.hpp"
#include "docgen/session.hpp"

namespace docgen::cli {

namespace {

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kIo: return kIoError;
    case ErrorCode::kEmptySelection:
    case ErrorCode::kUnknownTopic:
    case ErrorCode::kInfeasible:
    case ErrorCode::kPoolTooLarge: return kInfeasible;
    default: return kValidationError;
  }
}

struct TopicsPerRange {
  int lo = 1;
  int hi = 3;
};

// "N" or "LO..HI".
std::optional<TopicsPerRange> parse_range(const std::string& text) {
  auto to_int = [](const std::string& s) -> std::optional<int> {
    if (s.empty() || s.size() > 4 || s.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
    return std::stoi(s);
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    auto n = to_int(text);
    if (!n) return std::nullopt;
    return TopicsPerRange{*n, *n};
  }
  auto lo = to_int(text.substr(0, dots));
  auto hi = to_int(text.substr(dots + 2));
  if (!lo || !hi) return std::nullopt;
  return TopicsPerRange{*lo, *hi};
}

std::uint64_t random_seed() {
  std::random_device device;
  return (std::uint64_t{device()} << 32) ^ device();
}

HttpServer* g_server = nullptr;

extern "C" void handle_stop_signal(int) {
  if (g_server) g_server->stop();
}

void add_constraint_flags(CLI::App& cmd, GenerationConstraints& c) {
  cmd.add_option("--min-total", c.min_total_s, "Minimum documentary length in seconds")->capture_default_str();
  cmd.add_option("--max-total", c.max_total_s, "Maximum documentary length in seconds")->capture_default_str();
  cmd.add_option("--max-per-speaker", c.max_clips_per_speaker, "Clips allowed per interviewee")
      ->capture_default_str();
  cmd.add_option("--max-restarts", c.max_restarts, "Randomized attempts before giving up")
      ->capture_default_str();
  cmd.add_flag_callback("--no-coverage", [&c] { c.require_topic_coverage = false; },
                        "Do not require every selected topic to appear");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generate short documentaries from a tagged interview clip bank", "docgen"};
  app.require_subcommand(1);

  std::string manifest;
  GenerationConstraints constraints;

  auto* validate_cmd = app.add_subcommand("validate", "Load a clip bank and list warnings");
  validate_cmd->add_option("manifest", manifest, "Clip-bank manifest (JSON)")->required();
  bool strict = false;
  validate_cmd->add_flag("--strict", strict, "Exit 1 when any warning is reported");

  auto* stats_cmd = app.add_subcommand("stats", "Print clip-bank statistics");
  stats_cmd->add_option("manifest", manifest, "Clip-bank manifest (JSON)")->required();

  auto* generate_cmd = app.add_subcommand("generate", "Assemble one documentary");
  generate_cmd->add_option("manifest", manifest, "Clip-bank manifest (JSON)")->required();
  std::vector<std::string> topics;
  generate_cmd->add_option("--topics", topics, "Comma-separated topics")->required()->delimiter(',');
  std::optional<std::uint64_t> seed;
  generate_cmd->add_option("--seed", seed, "Random seed (chosen and reported on stderr when omitted)");
  std::string format = "json";
  generate_cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "m3u", "edl"}))
      ->capture_default_str();
  std::string session_log;
  generate_cmd->add_option("--session-log", session_log, "Append the generation to this NDJSON session log");
  add_constraint_flags(*generate_cmd, constraints);

  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a reconfiguring viewer and report coverage");
  simulate_cmd->add_option("manifest", manifest, "Clip-bank manifest (JSON)")->required();
  int generations = 10;
  simulate_cmd->add_option("--generations", generations, "Generations per session")->capture_default_str();
  std::string topics_per = "1..3";
  simulate_cmd->add_option("--topics-per", topics_per, "Topics per selection, N or LO..HI")->capture_default_str();
  std::uint64_t sim_seed = 0;
  simulate_cmd->add_option("--seed", sim_seed, "Simulation seed")->capture_default_str();
  std::string sim_log;
  simulate_cmd->add_option("--log", sim_log, "Write the simulated session log (NDJSON) here");
  add_constraint_flags(*simulate_cmd, constraints);

  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  serve_cmd->add_option("manifest", manifest, "Clip-bank manifest (JSON); DOCGEN_BANK_PATH overrides");
  ServiceConfig config;
  serve_cmd->add_option("--listen", config.listen_address, "host:port")->capture_default_str();
  std::string media_root;
  std::string ui_root;
  std::string session_dir = config.session_dir.string();
  serve_cmd->add_option("--media-root", media_root, "Directory served under /media");
  serve_cmd->add_option("--ui-root", ui_root, "Web UI bundle served at /");
  serve_cmd->add_option("--session-dir", session_dir, "Directory for session logs")->capture_default_str();
  add_constraint_flags(*serve_cmd, constraints);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const bool help = e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success);
    app.exit(e, help ? out : err, err);
    return help ? kOk : kValidationError;
  }

  try {
    if (*validate_cmd) {
      const ClipBank bank = load_bank(manifest);
      const ValidationReport report = validate_bank(bank);
      out << validation_report_json(report) << "\n";
      for (const auto& f : report) err << to_string(f.severity) << " " << to_string(f.code) << " " << f.subject << "\n";
      return strict && !report.empty() ? kValidationError : kOk;
    }
    if (*stats_cmd) {
      const ClipBank bank = load_bank(manifest);
      out << bank_stats_json(bank_stats(bank), bank) << "\n";
      return kOk;
    }
    if (*generate_cmd) {
      const ClipBank bank = load_bank(manifest);
      if (!seed) {
        seed = random_seed();
        err << "seed: " << *seed << "\n";
      }
      const Documentary doc = generate(bank, FilterSelection{topics}, constraints, *seed);
      const PlaylistFormat fmt = format == "m3u"   ? PlaylistFormat::kM3u
                                 : format == "edl" ? PlaylistFormat::kEdlCsv
                                                   : PlaylistFormat::kJson;
      out << export_documentary(doc, bank, fmt);
      if (!session_log.empty()) {
        const std::filesystem::path path = session_log;
        SessionLog log;
        log.session_id = path.stem().string();
        if (std::filesystem::exists(path)) log = load_session_log(path, log.session_id);
        log = record_generation(log, doc, bank);
        append_session_entry(path, log, log.entries.back());
      }
      return kOk;
    }
    if (*simulate_cmd) {
      const ClipBank bank = load_bank(manifest);
      auto range = parse_range(topics_per);
      if (!range) {
        err << "error: --topics-per expects N or LO..HI, got \"" << topics_per << "\"\n";
        return kValidationError;
      }
      SimulationPolicy policy{range->lo, range->hi, generations, constraints};
      const SimulationResult result = simulate(bank, policy, sim_seed);
      if (!sim_log.empty()) {
        std::ofstream file(sim_log, std::ios::binary | std::ios::trunc);
        if (!file) {
          err << "error: cannot write " << sim_log << "\n";
          return kIoError;
        }
        file << session_log_ndjson(result.log);
      }
      out << coverage_report_json(result.report) << "\n";
      return kOk;
    }
    if (*serve_cmd) {
      config.bank_path = manifest;
      config = apply_environment(std::move(config));
      if (config.bank_path.empty()) {
        err << "error: no manifest given and " << kBankPathEnv << " is not set\n";
        return kValidationError;
      }
      if (!media_root.empty()) config.media_root = media_root;
      if (!ui_root.empty()) config.ui_root = ui_root;
      config.session_dir = session_dir;
      config.default_constraints = constraints;
      auto address = parse_listen_address(config.listen_address);
      if (!address) {
        err << "error: --listen expects host:port, got \"" << config.listen_address << "\"\n";
        return kValidationError;
      }
      ApiService service(config);
      HttpServer server(service);
      const int port = server.bind(address->host, address->port);
      if (port < 0) {
        err << "error: cannot listen on " << config.listen_address << "\n";
        return kIoError;
      }
      err << "docgen serving " << service.bank().clips().size() << " clips on http://" << address->host << ":"
          << port << "\n";
      g_server = &server;
      std::signal(SIGINT, handle_stop_signal);
      std::signal(SIGTERM, handle_stop_signal);
      server.listen_after_bind();
      g_server = nullptr;
      return kOk;
    }
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kValidationError;
}

}  // namespace docgen::cli
