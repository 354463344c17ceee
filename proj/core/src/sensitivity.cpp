#include "ridge/sensitivity.hpp"

#include "ridge/error.hpp"
#include "ridge/format.hpp"
#include "ridge/ridge.hpp"

#include <cmath>
#include <ostream>

namespace ridge {

namespace {

void require_diagonal(const GaussianMeasure& mu) {
  if (!mu.cov().is_diagonal()) {
    throw Error(ErrorCode::NonDiagonalCovariance,
                "Sobol' indices need independent inputs (diagonal covariance); use the "
                "projector error bound for correlated inputs");
  }
}

// Unbiased estimate of E||v - E v||^2 from the columns of `values`.
double pooled_spread(const SpdMatrix& metric, const Matrix& values) {
  const Vector centre = values.rowwise().mean();
  double sum = 0.0;
  for (Index j = 0; j < values.cols(); ++j) sum += squared_norm(metric, values.col(j) - centre);
  return sum / static_cast<double>(values.cols() - 1);
}

// Ratio of means with a delta-method standard error.
std::pair<double, double> ratio_with_error(const std::vector<double>& num,
                                           const std::vector<double>& den) {
  const auto n = static_cast<double>(num.size());
  double a = 0.0;
  double b = 0.0;
  for (std::size_t k = 0; k < num.size(); ++k) {
    a += num[k];
    b += den[k];
  }
  a /= n;
  b /= n;
  const double ratio = a / b;
  double ss = 0.0;
  for (std::size_t k = 0; k < num.size(); ++k) {
    const double r = num[k] - ratio * den[k];
    ss += r * r;
  }
  const double se = std::sqrt(ss / (n - 1.0) / n) / b;
  return {ratio, se};
}

}  // namespace

RankRProjector coordinate_projector(const IndexGroup& tau) {
  const Index d = tau.dim();
  Matrix basis = Matrix::Zero(d, tau.size());
  for (Index k = 0; k < tau.size(); ++k) basis(tau.indices()[static_cast<std::size_t>(k)], k) = 1.0;
  Matrix p = basis * basis.transpose();
  return RankRProjector(std::move(p), tau.size(), std::move(basis), true, false);
}

RankRProjector coordinate_projector(const IndexGroup& tau, const GaussianMeasure& mu) {
  if (tau.dim() != mu.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "index group and measure dimensions differ");
  }
  RankRProjector p = coordinate_projector(tau);
  if (!mu.cov().is_diagonal()) return p;
  return RankRProjector(p.matrix(), p.rank(), p.basis(), true, true);
}

SobolEstimate sobol_estimates(const VectorValuedModel& model, const GaussianMeasure& mu,
                              const IndexGroup& tau, SampleStream stream, Index outer,
                              Index inner, const Execution& exec) {
  require_diagonal(mu);
  if (model.input_dim() != mu.dim() || tau.dim() != mu.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "sobol_estimates: dimension mismatch");
  }
  if (outer < 2 || inner < 1) {
    throw Error(ErrorCode::InvalidArgument, "sobol_estimates needs N >= 2 and M_inner >= 1");
  }
  const SpdMatrix& metric = model.output_metric();
  const Index n = model.output_dim();
  const SampleStream outer_stream = stream.substream(0);

  Matrix outputs(n, outer);
  std::vector<double> err_closed(static_cast<std::size_t>(outer));
  std::vector<double> err_total(static_cast<std::size_t>(outer));

  parallel_for(block_count(outer), exec, [&](std::int64_t b) {
    const Index last = std::min<Index>(outer, (b + 1) * kSampleBlock);
    Matrix keep_tau(n, inner + 1);
    Matrix keep_rest(n, inner + 1);
    for (Index k = b * kSampleBlock; k < last; ++k) {
      const Vector x = mu.draw_at(outer_stream, static_cast<std::uint64_t>(k));
      const Vector fx = model.eval(x);
      outputs.col(k) = fx;
      keep_tau.col(0) = fx;
      keep_rest.col(0) = fx;
      const SampleStream inner_stream = stream.substream(static_cast<std::uint64_t>(k) + 1);
      for (Index j = 0; j < inner; ++j) {
        const Vector y = mu.draw_at(inner_stream, static_cast<std::uint64_t>(j));
        Vector with_tau = y;
        Vector with_rest = x;
        for (Index i : tau.indices()) {
          with_tau(i) = x(i);
          with_rest(i) = y(i);
        }
        keep_tau.col(j + 1) = model.eval(with_tau);
        keep_rest.col(j + 1) = model.eval(with_rest);
      }
      err_closed[static_cast<std::size_t>(k)] = pooled_spread(metric, keep_tau);
      err_total[static_cast<std::size_t>(k)] = pooled_spread(metric, keep_rest);
    }
  });

  const Vector mean_output = outputs.rowwise().mean();
  const auto nn = static_cast<double>(outer);
  std::vector<double> spread(static_cast<std::size_t>(outer));
  double total = 0.0;
  for (Index k = 0; k < outer; ++k) {
    const double v = squared_norm(metric, outputs.col(k) - mean_output) * nn / (nn - 1.0);
    spread[static_cast<std::size_t>(k)] = v;
    total += v;
  }
  total /= nn;
  if (!(total > 0.0)) throw Error(ErrorCode::ZeroVariance, "model output has zero variance");
  double ss = 0.0;
  for (double v : spread) ss += (v - total) * (v - total);

  SobolEstimate est;
  est.total_variance = total;
  est.total_variance_se = std::sqrt(ss / (nn - 1.0) / nn);
  const auto [closed_ratio, closed_se] = ratio_with_error(err_closed, spread);
  const auto [total_ratio, total_se] = ratio_with_error(err_total, spread);
  est.s_hat = 1.0 - closed_ratio;
  est.s_se = closed_se;
  est.t_hat = total_ratio;
  est.t_se = total_se;
  return est;
}

Vector dgsm(const VectorValuedModel& model, const GaussianMeasure& mu, SampleStream stream,
            Index samples, const Execution& exec) {
  return estimate_h(model, mu, stream, samples, exec).h.entries().diagonal();
}

SobolBounds sobol_bounds(const Vector& dgsm, const GaussianMeasure& mu, const IndexGroup& tau,
                         double total_variance) {
  require_diagonal(mu);
  if (dgsm.size() != mu.dim() || tau.dim() != mu.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "sobol_bounds: dimension mismatch");
  }
  if (!(total_variance > 0.0)) throw Error(ErrorCode::ZeroVariance, "total variance must be > 0");
  double inside = 0.0;
  double outside = 0.0;
  for (Index i = 0; i < mu.dim(); ++i) {
    const double weighted = mu.cov().entries()(i, i) * dgsm(i);
    (tau.contains(i) ? inside : outside) += weighted;
  }
  SobolBounds out;
  out.s_lower = 1.0 - outside / total_variance;
  out.t_upper = inside / total_variance;
  out.vacuous = out.s_lower < 0.0;
  return out;
}

SensitivityReport sensitivity_report(const VectorValuedModel& model, const GaussianMeasure& mu,
                                     const std::vector<IndexGroup>& groups, SampleStream stream,
                                     const SensitivityOptions& options, const Execution& exec) {
  require_diagonal(mu);
  SensitivityReport report;
  report.dgsm = dgsm(model, mu, stream.substream(0), options.dgsm_samples, exec);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    GroupSensitivity entry;
    entry.group = groups[g];
    entry.estimate = sobol_estimates(model, mu, groups[g], stream.substream(g + 1), options.outer,
                                     options.inner, exec);
    if (g == 0) {
      report.total_variance = entry.estimate.total_variance;
      report.total_variance_se = entry.estimate.total_variance_se;
    }
    entry.bounds = sobol_bounds(report.dgsm, mu, groups[g], entry.estimate.total_variance);
    report.groups.push_back(std::move(entry));
  }
  return report;
}

void write_sensitivity_csv(std::ostream& out, const SensitivityReport& report) {
  out << "group,S_hat,S_se,S_lower,T_hat,T_se,T_upper,vacuous\n";
  for (const auto& g : report.groups) {
    out << g.group.label() << ',' << format_double(g.estimate.s_hat) << ','
        << format_double(g.estimate.s_se) << ',' << format_double(g.bounds.s_lower) << ','
        << format_double(g.estimate.t_hat) << ',' << format_double(g.estimate.t_se) << ','
        << format_double(g.bounds.t_upper) << ',' << (g.bounds.vacuous ? 1 : 0) << '\n';
  }
}

nlohmann::json to_json(const SensitivityReport& report) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : report.groups) {
    groups.push_back({{"group", g.group.indices()},
                      {"S_hat", g.estimate.s_hat},
                      {"S_se", g.estimate.s_se},
                      {"S_lower", g.bounds.s_lower},
                      {"T_hat", g.estimate.t_hat},
                      {"T_se", g.estimate.t_se},
                      {"T_upper", g.bounds.t_upper},
                      {"vacuous", g.bounds.vacuous},
                      {"total_variance", g.estimate.total_variance}});
  }
  std::vector<double> dgsm_values(report.dgsm.data(), report.dgsm.data() + report.dgsm.size());
  return {{"groups", groups},
          {"dgsm", dgsm_values},
          {"total_variance", report.total_variance},
          {"total_variance_se", report.total_variance_se}};
}

}  // namespace ridge
