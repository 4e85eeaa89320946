// delib: run simulations, analyze and verify event logs, serve the API.
//
// Exit codes: 0 ok, 2 bad spec or arguments, 3 unreadable or corrupt log,
// 4 environment (e.g. port already bound), 5 determinism violation.

#include <csignal>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "delib/codec.hpp"
#include "delib/error.hpp"
#include "delib/report.hpp"
#include "delib/service.hpp"
#include "delib/sim.hpp"
#include "delib/store.hpp"

namespace fs = std::filesystem;
using namespace delib;

namespace {

enum Exit { kOk = 0, kSpec = 2, kLog = 3, kEnv = 4, kInvariant = 5 };

int simulate(const fs::path& config, std::optional<std::uint64_t> seed, const fs::path& out) {
  sim::PopulationSpec spec;
  try {
    spec = sim::load_spec(config);
    if (seed) {
      spec.seed = *seed;
      spec.engine.scheduler.rng_seed = *seed;
    }
  } catch (const Error& e) {
    std::cerr << "simulate: " << e.what() << "\n";
    return kSpec;
  }
  try {
    const auto result = sim::run_experiment(spec);
    sim::write_outputs(result, out);
    std::cout << "wrote " << (out / "report.json").string() << " (" << result.deliberation.events().size()
              << " events)\n";
  } catch (const Error& e) {
    std::cerr << "simulate: " << e.what() << "\n";
    return e.code() == ErrorCode::Invalid ? kSpec : kInvariant;
  }
  return kOk;
}

int analyze(const fs::path& log, std::optional<double> threshold, std::optional<int> top_k,
            const std::optional<fs::path>& out) {
  DeliberationState state;
  try {
    state = replay(read_log(log));
  } catch (const Error& e) {
    std::cerr << "analyze: " << e.what() << "\n";
    return kLog;
  }
  const double x = threshold.value_or(state.config.clustering.threshold);
  const int k = top_k.value_or(state.config.clustering.top_k);
  if (k < 1) {
    std::cerr << "analyze: --top-k must be >= 1\n";
    return kSpec;
  }
  const auto text = codec::canonical(report::analysis(state, x, k)) + "\n";
  if (out) {
    write_file(*out, text);
  } else {
    std::cout << text;
  }
  return kOk;
}

int replay_check(const fs::path& log) {
  std::string bytes;
  LogContents contents;
  try {
    bytes = read_file(log);
    contents = parse_log(bytes);
  } catch (const Error& e) {
    std::cerr << "replay-check: " << e.what() << "\n";
    return kLog;
  }
  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
    if (!ok) ++failures;
  };
  try {
    const auto first = replay(contents);
    const auto second = replay(contents);
    const auto snap = snapshot(first);
    check(snap == snapshot(second), "two replays give identical snapshots");
    const auto& cfg = first.config.clustering;
    check(report::analysis(first, cfg.threshold, cfg.top_k) == report::analysis(second, cfg.threshold, cfg.top_k),
          "two replays give identical analysis reports");
    check(serialize_log(contents.deliberation, contents.events) == bytes, "log re-encodes to the same bytes");
    check(snapshot(load_snapshot(snap)) == snap, "snapshot survives a load round trip");

    const auto snaps = log.parent_path() / "snapshots";
    if (fs::is_directory(snaps)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(snaps))
        if (e.path().extension() == ".snap") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        const auto seq = std::stoull(f.stem().string());
        const bool in_range = seq <= contents.events.size();
        const auto prefix = std::span<const Event>(contents.events).first(in_range ? seq : 0);
        check(in_range && snapshot(replay(contents.deliberation, prefix)) == read_file(f),
              "stored snapshot " + f.filename().string() + " matches replay");
      }
    }
  } catch (const Error& e) {
    std::cerr << "replay-check: " << e.what() << "\n";
    return e.code() == ErrorCode::CorruptLog || e.code() == ErrorCode::VersionError ? kLog : kInvariant;
  }
  return failures == 0 ? kOk : kInvariant;
}

httplib::Server* g_server = nullptr;

int serve(const fs::path& data_dir, const std::string& host, int port, std::optional<std::uint64_t> seed) {
  ServiceOptions options;
  if (seed) options.default_config.scheduler.rng_seed = *seed;
  std::optional<Service> service;
  try {
    service.emplace(data_dir, options);
  } catch (const Error& e) {
    std::cerr << "serve: " << e.what() << "\n";
    return kLog;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "serve: " << e.what() << "\n";
    return kEnv;
  }
  httplib::Server server;
  // The library default adds SO_REUSEPORT, which would let a second server
  // share a port that is already taken.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  service->mount(server);
  if (!server.bind_to_port(host, port)) {
    std::cerr << "serve: cannot bind " << host << ":" << port << "\n";
    return kEnv;
  }
  g_server = &server;
  std::signal(SIGINT, [](int) { if (g_server) g_server->stop(); });
  std::signal(SIGTERM, [](int) { if (g_server) g_server->stop(); });
  std::cout << "listening on " << host << ":" << port << "\n" << std::flush;
  server.listen_after_bind();
  g_server = nullptr;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deliberation engine: simulate, analyze, replay-check, serve"};
  app.require_subcommand(1);

  std::string config, out, log, data_dir = "data", host = "127.0.0.1", analyze_out;
  std::optional<std::uint64_t> seed;
  std::optional<double> threshold;
  std::optional<int> top_k;
  int port = 8080;

  auto* sim_cmd = app.add_subcommand("simulate", "Run a scenario and write its log and report");
  sim_cmd->add_option("--config", config, "Scenario spec (JSON)")->required();
  sim_cmd->add_option("--seed", seed, "Override the spec seed");
  sim_cmd->add_option("--out", out, "Output directory")->required();

  auto* an_cmd = app.add_subcommand("analyze", "Replay a log and print front, clusters, digest, shortlist");
  an_cmd->add_option("log", log, "events.log")->required();
  an_cmd->add_option("--threshold", threshold, "Clustering threshold x");
  an_cmd->add_option("--top-k", top_k, "Digest entries per cluster");
  an_cmd->add_option("--out", analyze_out, "Write the report here instead of stdout");
  an_cmd->add_option("--seed", seed, "Accepted for uniformity; analysis is deterministic");

  auto* rc_cmd = app.add_subcommand("replay-check", "Verify that a log replays deterministically");
  rc_cmd->add_option("log", log, "events.log")->required();
  rc_cmd->add_option("--seed", seed, "Accepted for uniformity; replay is deterministic");

  auto* sv_cmd = app.add_subcommand("serve", "Serve the HTTP API over a data directory");
  sv_cmd->add_option("--data-dir", data_dir, "Directory holding <id>/events.log");
  sv_cmd->add_option("--host", host, "Bind address");
  sv_cmd->add_option("--port", port, "Port");
  sv_cmd->add_option("--seed", seed, "rng_seed for deliberations created without a config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kSpec;
  }

  try {
    if (*sim_cmd) return simulate(config, seed, out);
    if (*an_cmd)
      return analyze(log, threshold, top_k, analyze_out.empty() ? std::nullopt : std::optional<fs::path>(analyze_out));
    if (*rc_cmd) return replay_check(log);
    if (*sv_cmd) return serve(data_dir, host, port, seed);
  } catch (const std::exception& e) {
    std::cerr << "delib: " << e.what() << "\n";
    return kEnv;
  }
  return kSpec;
}
