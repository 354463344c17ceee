#include "app.hpp"

#include "config.hpp"
#include "experiments.hpp"

#include <ridge/error.hpp>
#include <ridge/version.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <thread>

namespace ridge::cli {
namespace {

using Runner = std::function<OutputFiles(const ExperimentConfig&, const Problem&, const RunContext&)>;

bool is_config_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::ParseError:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::RankOutOfRange:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::NonStandardMeasure:
    case ErrorCode::NonDiagonalCovariance:
      return true;
    default:
      return false;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gradient-based ridge approximation experiments", "ridgeapprox"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());

  const std::map<std::string, std::pair<std::string, Runner>> commands{
      {"curve", {"Error and bounds versus projector rank", run_error_curve}},
      {"audit", {"Bounds of estimated projectors against a reference H", run_projector_audit}},
      {"spectrum", {"Spectra of H and Sigma, plus leading mode fields", run_spectrum}},
      {"sobol", {"Sobol' indices with derivative-based bounds", run_sobol}},
  };
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config_path, "Experiment JSON")->required();
    sub->add_option("--out", out_dir, "Output directory (overrides output_dir)");
    sub->add_option("--seed", seed, "Seed override");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  const bool seed_given = sub->get_option("--seed")->count() > 0;

  ExperimentConfig config;
  Diagnostics diagnostics;
  try {
    config = load_config(config_path);
    if (seed_given) override_seed(config, seed);
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (config.output_dir.empty()) throw ConfigError("no output directory: pass --out or set output_dir");
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + config.output_dir + "': " + ec.message());

    const Problem problem = build_problem(config, &diagnostics);
    const RunContext ctx{command, config.output_dir, Execution{threads}, &diagnostics};
    const OutputFiles files = commands.at(command).second(config, problem, ctx);
    for (const auto& w : diagnostics.warnings()) err << "warning [" << w.code << "]: " << w.message << '\n';
    for (const auto& f : files) out << (std::filesystem::path(config.output_dir) / f).string() << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    for (const auto& w : diagnostics.warnings()) err << "warning [" << w.code << "]: " << w.message << '\n';
    if (e.code() == ErrorCode::NonDiagonalCovariance) {
      err << "config error: " << e.what()
          << "\nSobol' indices need independent inputs; use the 'curve' subcommand for correlated measures.\n";
      return kExitConfig;
    }
    err << (is_config_error(e.code()) ? "config error: " : "numerical failure: ") << e.what() << '\n';
    return is_config_error(e.code()) ? kExitConfig : kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace ridge::cli
