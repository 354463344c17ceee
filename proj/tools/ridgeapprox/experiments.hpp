#pragma once
// The four experiment drivers behind the subcommands. Each writes plot-ready
// CSV files into `out_dir`, every file starting with '#' metadata lines.
#include "config.hpp"

#include <ridge/diagnostics.hpp>
#include <ridge/parallel.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace ridge::cli {

struct RunContext {
  std::string command;
  std::filesystem::path out_dir;
  Execution exec;
  Diagnostics* diagnostics = nullptr;
};

/// Files written by a run, relative to the output directory, in write order.
using OutputFiles = std::vector<std::string>;

/// error_curve.csv: r,M,bound_opt,bound_kl,error,mse,mse_se,profile_mse,profile_se,exact_mse
/// Bounds and error are in norm scale; mse columns are squared. profile_* is the
/// exact conditional expectation validated on the same sample, exact_mse its
/// closed form; both are left empty when unavailable.
OutputFiles run_error_curve(const ExperimentConfig& config, const Problem& problem,
                            const RunContext& ctx);

/// projector_audit.csv: K,replicate,r,bound_true,bound_approx,rank_upper_bound,beyond_rank_ceiling
OutputFiles run_projector_audit(const ExperimentConfig& config, const Problem& problem,
                                const RunContext& ctx);

/// spectrum.csv: r,lambda,tail_sum,kl_sigma2,kl_tail_sum for r = 0..d, plus
/// mode_h_<i>.csv and mode_kl_<i>.csv (i = 1..6) for pde models.
OutputFiles run_spectrum(const ExperimentConfig& config, const Problem& problem,
                         const RunContext& ctx);

/// sobol.csv and sobol.json.
OutputFiles run_sobol(const ExperimentConfig& config, const Problem& problem,
                      const RunContext& ctx);

/// The '#' lines heading every output file.
std::string metadata_header(const ExperimentConfig& config, const std::string& command);

}  // namespace ridge::cli
