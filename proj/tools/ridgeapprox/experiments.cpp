#include "experiments.hpp"

#include <ridge/analytical_models.hpp>
#include <ridge/error.hpp>
#include <ridge/format.hpp>
#include <ridge/index_group.hpp>
#include <ridge/ridge.hpp>
#include <ridge/sensitivity.hpp>
#include <ridge/version.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace ridge::cli {
namespace {

constexpr Index kModeFiles = 6;

std::string fmt(double x) { return format_double(x); }
std::string fmt(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

class CsvFile {
 public:
  CsvFile(const RunContext& ctx, const ExperimentConfig& config, const std::string& name,
          OutputFiles& files)
      : out_(ctx.out_dir / name, std::ios::binary) {
    if (!out_) throw Error(ErrorCode::InvalidArgument, "cannot write " + (ctx.out_dir / name).string());
    out_ << metadata_header(config, ctx.command);
    files.push_back(name);
  }
  std::ostream& stream() { return out_; }
  // Rows are flushed one by one so partial results survive a failure.
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};

SampleStream base_stream(const ExperimentConfig& config) {
  return SampleStream(config.sampling.seed, 0);
}

RankRProjector projector_for(const GeneralizedEigenPairs& pairs, const GaussianMeasure& mu,
                             Index r, Index rank_ub, Diagnostics* diag) {
  if (r == 0) return RankRProjector::zero(mu.dim());
  return optimal_projector(pairs, mu, r, rank_ub, diag);
}

double kl_bound(const GaussianMeasure& mu, const SpdMatrix& h, Index r) {
  const RankRProjector p = r == 0 ? RankRProjector::zero(mu.dim()) : kl_projector(mu, r);
  return error_bound(p, h, mu);
}

struct ExactProfile {
  Approximation profile;
  std::optional<double> closed_form;
};

std::optional<ExactProfile> exact_profile(const VectorValuedModel& model, const GaussianMeasure& mu,
                                          const RankRProjector& p) {
  if (const auto* lin = dynamic_cast<const LinearModel*>(&model)) {
    return ExactProfile{linear_exact_profile(*lin, mu, p), linear_cond_exp_error(*lin, mu, p)};
  }
  if (const auto* quad = dynamic_cast<const QuadraticFormModel*>(&model)) {
    if (!mu.is_standard()) return std::nullopt;
    return ExactProfile{quadratic_exact_profile(*quad, mu, p), quadratic_cond_exp_error(*quad, mu, p)};
  }
  return std::nullopt;
}

}  // namespace

std::string metadata_header(const ExperimentConfig& config, const std::string& command) {
  std::ostringstream out;
  out << "# ridgeapprox " << kVersion << " " << command << '\n';
  out << "# config_hash: fnv1a64:" << config_hash(config) << '\n';
  out << "# seed: " << config.sampling.seed << '\n';
  out << "# versions: ridge-core=" << kVersion << " ridgeapprox=" << kVersion
      << " eigen=" << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION
      << " nlohmann_json=" << NLOHMANN_JSON_VERSION_MAJOR << '.' << NLOHMANN_JSON_VERSION_MINOR
      << '.' << NLOHMANN_JSON_VERSION_PATCH << '\n';
  return out.str();
}

OutputFiles run_error_curve(const ExperimentConfig& config, const Problem& problem,
                            const RunContext& ctx) {
  const VectorValuedModel& model = *problem.model;
  const GaussianMeasure& mu = problem.measure;
  const SampleStream base = base_stream(config);
  const SamplingSpec& s = config.sampling;

  const HMatrixEstimate h = estimate_h(model, mu, base.substream(1), s.k, ctx.exec);
  const GeneralizedEigenPairs pairs = generalized_eig(h.h, mu.cov());
  const SpectrumReport spectrum = spectrum_report(pairs, mu);
  const SampleStream validation = base.substream(3);

  OutputFiles files;
  CsvFile csv(ctx, config, "error_curve.csv", files);
  csv.row({"r", "M", "bound_opt", "bound_kl", "error", "mse", "mse_se", "profile_mse", "profile_se",
           "exact_mse"});
  for (Index r : problem.ranks) {
    const RankRProjector p = projector_for(pairs, mu, r, h.rank_upper_bound, ctx.diagnostics);
    const double bound_opt = std::sqrt(std::max(0.0, spectrum.tail_sums(r)));
    const double bound_kl = std::sqrt(kl_bound(mu, h.h, r));

    std::optional<double> profile_mse, profile_se, exact_mse;
    if (const auto exact = exact_profile(model, mu, p)) {
      const ValidationResult v = validate_error(exact->profile, model, mu, validation, s.n_val, ctx.exec);
      profile_mse = v.mse;
      profile_se = v.standard_error;
      exact_mse = exact->closed_form;
    }
    for (Index m : s.m) {
      const SampleStream cond = base.substream(2).substream(static_cast<std::uint64_t>(r))
                                    .substream(static_cast<std::uint64_t>(m));
      const RidgeApproximation ridge = build_ridge(model, mu, p, cond, m);
      const ValidationResult v = validate_error(ridge, model, mu, validation, s.n_val, ctx.exec);
      csv.row({std::to_string(r), std::to_string(m), fmt(bound_opt), fmt(bound_kl),
               fmt(std::sqrt(v.mse)), fmt(v.mse), fmt(v.standard_error), fmt(profile_mse),
               fmt(profile_se), fmt(exact_mse)});
    }
  }
  return files;
}

OutputFiles run_projector_audit(const ExperimentConfig& config, const Problem& problem,
                                const RunContext& ctx) {
  const VectorValuedModel& model = *problem.model;
  const GaussianMeasure& mu = problem.measure;
  const SampleStream base = base_stream(config);
  const SamplingSpec& s = config.sampling;

  // Replicate j draws from substream(1 + j); replicate 0 shares its draws with
  // the reference, so K = K_ref reproduces it exactly.
  const HMatrixEstimate ref = estimate_h(model, mu, base.substream(1), s.k_ref, ctx.exec);

  OutputFiles files;
  CsvFile csv(ctx, config, "projector_audit.csv", files);
  csv.row({"K", "replicate", "r", "bound_true", "bound_approx", "rank_upper_bound",
           "beyond_rank_ceiling"});
  for (Index k : s.k_ladder) {
    for (Index j = 0; j < s.replicates; ++j) {
      const HMatrixEstimate hk =
          estimate_h(model, mu, base.substream(1 + static_cast<std::uint64_t>(j)), k, ctx.exec);
      const GeneralizedEigenPairs pairs = generalized_eig(hk.h, mu.cov());
      for (Index r : problem.ranks) {
        // Ranks past the ceiling are expected here; they are flagged, not warned about.
        const RankRProjector p = projector_for(pairs, mu, r, hk.rank_upper_bound, nullptr);
        csv.row({std::to_string(k), std::to_string(j), std::to_string(r),
                 fmt(error_bound(p, ref, mu)), fmt(error_bound(p, hk, mu)),
                 std::to_string(hk.rank_upper_bound), r > hk.rank_upper_bound ? "1" : "0"});
      }
    }
  }
  return files;
}

OutputFiles run_spectrum(const ExperimentConfig& config, const Problem& problem,
                         const RunContext& ctx) {
  const VectorValuedModel& model = *problem.model;
  const GaussianMeasure& mu = problem.measure;
  const HMatrixEstimate h =
      estimate_h(model, mu, base_stream(config).substream(1), config.sampling.k, ctx.exec);
  const GeneralizedEigenPairs pairs = generalized_eig(h.h, mu.cov());
  const SpectrumReport report = spectrum_report(pairs, mu);
  const Index d = mu.dim();

  OutputFiles files;
  {
    CsvFile csv(ctx, config, "spectrum.csv", files);
    csv.row({"r", "lambda", "tail_sum", "kl_sigma2", "kl_tail_sum"});
    for (Index r = 0; r <= d; ++r) {
      const bool has_value = r >= 1;
      csv.row({std::to_string(r), has_value ? fmt(report.eigenvalues(r - 1)) : "",
               fmt(report.tail_sums(r)), has_value ? fmt(report.kl_eigenvalues(r - 1)) : "",
               fmt(report.kl_tail_sums(r))});
    }
  }
  if (problem.pde != nullptr) {
    const Index modes = std::min(kModeFiles, d);
    const Matrix& kl = mu.covariance_eigen().vectors;
    for (Index i = 0; i < modes; ++i) {
      CsvFile csv(ctx, config, "mode_h_" + std::to_string(i + 1) + ".csv", files);
      pde::mode_field_export(csv.stream(), problem.pde->mesh(), pairs.vectors.col(i));
    }
    for (Index i = 0; i < modes; ++i) {
      CsvFile csv(ctx, config, "mode_kl_" + std::to_string(i + 1) + ".csv", files);
      pde::mode_field_export(csv.stream(), problem.pde->mesh(), kl.col(i));
    }
  }
  return files;
}

OutputFiles run_sobol(const ExperimentConfig& config, const Problem& problem,
                      const RunContext& ctx) {
  const GaussianMeasure& mu = problem.measure;
  const Index d = mu.dim();
  std::vector<IndexGroup> groups;
  if (config.sobol.groups.empty()) {
    for (Index i = 0; i < d; ++i) groups.emplace_back(std::vector<Index>{i}, d);
  } else {
    for (const auto& g : config.sobol.groups) groups.emplace_back(g, d);
  }
  const SensitivityOptions options{config.sobol.outer, config.sobol.inner, config.sobol.dgsm_samples};
  const SensitivityReport report =
      sensitivity_report(*problem.model, mu, groups, base_stream(config).substream(4), options, ctx.exec);

  OutputFiles files;
  {
    CsvFile csv(ctx, config, "sobol.csv", files);
    write_sensitivity_csv(csv.stream(), report);
  }
  {
    nlohmann::json doc = to_json(report);
    doc["metadata"] = {{"command", ctx.command},
                       {"config_hash", "fnv1a64:" + config_hash(config)},
                       {"seed", config.sampling.seed},
                       {"version", kVersion}};
    std::ofstream out(ctx.out_dir / "sobol.json", std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write sobol.json");
    out << doc.dump(2) << '\n';
    files.push_back("sobol.json");
  }
  return files;
}

}  // namespace ridge::cli
