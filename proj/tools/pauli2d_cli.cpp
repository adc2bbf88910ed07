// Command-line driver: one scenario per invocation, reports and CSVs to --out.
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pauli2d/pauli2d.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 64;

int exit_code(p2d_status s) {
  switch (s) {
    case P2D_OK: return kExitOk;
    case P2D_ERR_CONFIG:
    case P2D_ERR_DOMAIN:
    case P2D_ERR_INVALID_ARGUMENT: return kExitConfig;
    case P2D_ERR_NUMERICAL: return kExitNumerical;
    default: return kExitInternal;
  }
}

bool write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
  return static_cast<bool>(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pauli operators with anomalous magnetic moment in two dimensions"};
  app.set_version_flag("--version", std::string(p2d_version()));
  app.require_subcommand(1, 1);

  std::string config_path, out_dir, log_level = "warn";
  int threads = 1;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;

  const struct {
    const char* name;
    const char* help;
  } tasks[] = {
      {"fields", "flux and sampled field"},
      {"potential", "logarithmic potential and vector potential on the grid"},
      {"spectrum", "lowest eigenvalues and negative-eigenvalue count"},
      {"certify", "variational certificate of the bound-state count"},
      {"weak", "zero-flux weak-coupling analysis and coupling sweep"},
      {"asymptotics", "far-field behaviour of the potential"},
      {"check", "invariant suite on a small grid"},
  };
  for (const auto& t : tasks) {
    CLI::App* sub = app.add_subcommand(t.name, t.help);
    sub->add_option("--config", config_path, "scenario JSON file")->required()->check(
        CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (report goes to stdout if omitted)");
    sub->add_option("--threads", threads, "worker thread cap, 0 for all cores")
        ->check(CLI::Range(0, 1024));
    auto* so = sub->add_option("--seed", seed, "random seed overriding the config");
    if (!seed_opt) seed_opt = so;
    sub->add_option("--log-level", log_level, "trace, debug, info, warn, error, off")
        ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const std::string task = app.get_subcommands().front()->get_name();
  const bool seed_given = app.get_subcommands().front()->count("--seed") > 0;

  p2d_set_log_level(log_level.c_str());
  p2d_set_max_threads(threads);

  std::ifstream in(config_path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  if (!in) {
    std::cerr << "error: cannot read " << config_path << "\n";
    return kExitConfig;
  }

  const std::string options = seed_given ? "{\"seed\": " + std::to_string(seed) + "}" : "";
  p2d_result* result = nullptr;
  const p2d_status status =
      p2d_run(task.c_str(), buf.str().c_str(), options.empty() ? nullptr : options.c_str(), &result);
  if (status != P2D_OK)
    std::cerr << "error: " << p2d_status_name(status) << ": " << p2d_last_error_message() << "\n";
  if (!result) return exit_code(status);

  int code = exit_code(status);
  if (out_dir.empty()) {
    std::cout << p2d_result_report(result);
  } else {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    const std::filesystem::path dir(out_dir);
    bool ok = !ec && write_file(dir / p2d_result_report_name(result), p2d_result_report(result));
    for (size_t i = 0; ok && i < p2d_result_artifact_count(result); ++i)
      ok = write_file(dir / p2d_result_artifact_name(result, i),
                      p2d_result_artifact_content(result, i));
    if (!ok) {
      std::cerr << "error: cannot write to " << out_dir << "\n";
      code = kExitInternal;
    }
  }
  p2d_result_free(result);
  return code;
}
