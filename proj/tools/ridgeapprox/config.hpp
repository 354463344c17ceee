#pragma once
// Experiment configuration: one JSON document per run.
//
// {
//   "model":    {"type": "linear", "matrix": [[...]]}
//               {"type": "linear", "input_dim": 10, "output_dim": 4, "seed": 7}
//               {"type": "quadratic", "matrix": [[...]]} or {"type": "quadratic", "dim": 8, "seed": 1}
//               {"type": "sines", "amplitudes": [...], "frequencies": [...]} or {"dim": 6, "seed": 1}
//               {"type": "pde", "scenario": "point_pair", "grid": 12, "alpha": 10, "beta": 1}
//   "measure":  {"type": "standard"} | {"type": "diagonal", "variances": [...]}
//               {"type": "explicit", "covariance": [[...]]}
//               {"type": "squared_exponential", "lengthscale": 0.15}   (pde only, default there)
//               each with an optional "mean"
//   "sampling": {"K": 1000, "M": [1, 5, 20], "N_val": 300, "seed": 0,
//                "K_ladder": [10, 30, 100, 400], "K_ref": 4000, "replicates": 1}
//   "ranks":    [0, 1, ...]                  (default 0..d)
//   "sobol":    {"groups": [[0], [1, 2]], "N": 2000, "M_inner": 64, "dgsm_samples": 2000}
//   "output_dir": "out"
// }
#include <ridge/gaussian_measure.hpp>
#include <ridge/model.hpp>
#include <ridge/pde/diffusion_model.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ridge::cli {

/// Invalid or inconsistent configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { Linear, Quadratic, Sines, Pde };

struct ModelSpec {
  ModelKind kind = ModelKind::Linear;
  Matrix matrix;                   // linear / quadratic
  Vector amplitudes;               // sines
  Vector frequencies;              // sines
  pde::ScenarioOptions scenario;   // pde
  Index grid = 12;                 // pde
};

enum class MeasureKind { Standard, Diagonal, Explicit, SquaredExponential };

struct MeasureSpec {
  MeasureKind kind = MeasureKind::Standard;
  std::optional<Vector> mean;
  Vector variances;
  Matrix covariance;
  double lengthscale = 0.15;
};

struct SamplingSpec {
  Index k = 1000;
  std::vector<Index> m{1, 5, 20};
  Index n_val = 300;
  std::uint64_t seed = 0;
  std::vector<Index> k_ladder{10, 30, 100, 400};
  Index k_ref = 4000;
  Index replicates = 1;
};

struct SobolSpec {
  std::vector<std::vector<Index>> groups;  // empty: all singletons
  Index outer = 2000;
  Index inner = 64;
  Index dgsm_samples = 2000;
};

struct ExperimentConfig {
  ModelSpec model;
  MeasureSpec measure;
  SamplingSpec sampling;
  std::vector<Index> ranks;  // empty: 0..d
  SobolSpec sobol;
  std::string output_dir;
  nlohmann::json source;  // effective document, seed override applied
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Replaces the seed in both the parsed config and its source document.
void override_seed(ExperimentConfig& config, std::uint64_t seed);
/// FNV-1a 64 of the canonical dump of `config.source`, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Model and measure instantiated from a config.
struct Problem {
  std::unique_ptr<VectorValuedModel> model;
  GaussianMeasure measure;
  const pde::DiffusionModel* pde = nullptr;  // set for pde models
  std::vector<Index> ranks;                  // resolved and validated
};

Problem build_problem(const ExperimentConfig& config, Diagnostics* diagnostics = nullptr);

}  // namespace ridge::cli
