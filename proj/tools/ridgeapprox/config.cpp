#include "config.hpp"

#include <ridge/analytical_models.hpp>
#include <ridge/error.hpp>
#include <ridge/random.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>

namespace ridge::cli {
namespace {

using nlohmann::json;

constexpr std::uint64_t kRandomModelStream = 0x6d6f64656cULL;

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return key == a; });
    if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + ": not finite");
  return x;
}

Index count(const json& v, const std::string& where, Index min = 1) {
  if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < min) throw ConfigError(where + ": must be at least " + std::to_string(min));
  return static_cast<Index>(x);
}

std::vector<Index> count_list(const json& v, const std::string& where, Index min = 1) {
  if (!v.is_array() || v.empty()) throw ConfigError(where + ": expected a non-empty array");
  std::vector<Index> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(count(v[i], where + "[" + std::to_string(i) + "]", min));
  }
  return out;
}

Vector vector_of(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ConfigError(where + ": expected a non-empty array");
  Vector out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Index>(i)) = number(v[i], where + "[" + std::to_string(i) + "]");
  }
  return out;
}

Matrix matrix_of(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ConfigError(where + ": expected an array of rows");
  const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
  if (cols == 0) throw ConfigError(where + ": empty row");
  Matrix out(static_cast<Index>(v.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_array() || v[i].size() != cols) throw ConfigError(where + ": ragged rows");
    for (std::size_t j = 0; j < cols; ++j) {
      out(static_cast<Index>(i), static_cast<Index>(j)) =
          number(v[i][j], where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
  }
  return out;
}

Vector random_normals(SampleStream& stream, Index n) {
  Vector z(n);
  stream.normals({z.data(), static_cast<std::size_t>(n)});
  return z;
}

std::uint64_t seed_of(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ConfigError(where + ": expected a non-negative integer");
}

std::uint64_t model_seed(const json& m) { return m.contains("seed") ? seed_of(m["seed"], "model.seed") : 0; }

ModelSpec parse_model(const json& m) {
  if (!m.is_object() || !m.contains("type") || !m["type"].is_string()) {
    throw ConfigError("model.type: required string");
  }
  const std::string type = m["type"].get<std::string>();
  ModelSpec spec;
  if (type == "linear") {
    check_keys(m, {"type", "matrix", "input_dim", "output_dim", "seed"}, "model");
    spec.kind = ModelKind::Linear;
    if (m.contains("matrix")) {
      spec.matrix = matrix_of(m["matrix"], "model.matrix");
    } else {
      if (!m.contains("input_dim") || !m.contains("output_dim")) {
        throw ConfigError("model: linear needs 'matrix' or 'input_dim' and 'output_dim'");
      }
      const Index d = count(m["input_dim"], "model.input_dim");
      const Index n = count(m["output_dim"], "model.output_dim");
      SampleStream stream(model_seed(m), kRandomModelStream);
      spec.matrix = random_normals(stream, n * d).reshaped(n, d);
    }
  } else if (type == "quadratic") {
    check_keys(m, {"type", "matrix", "dim", "seed"}, "model");
    spec.kind = ModelKind::Quadratic;
    if (m.contains("matrix")) {
      spec.matrix = matrix_of(m["matrix"], "model.matrix");
      if (spec.matrix.rows() != spec.matrix.cols()) throw ConfigError("model.matrix: must be square");
    } else {
      if (!m.contains("dim")) throw ConfigError("model: quadratic needs 'matrix' or 'dim'");
      const Index d = count(m["dim"], "model.dim");
      SampleStream stream(model_seed(m), kRandomModelStream);
      const Matrix g = random_normals(stream, d * d).reshaped(d, d);
      spec.matrix = 0.5 * (g + g.transpose());
    }
  } else if (type == "sines") {
    check_keys(m, {"type", "amplitudes", "frequencies", "dim", "seed"}, "model");
    spec.kind = ModelKind::Sines;
    if (m.contains("amplitudes") || m.contains("frequencies")) {
      if (!m.contains("amplitudes") || !m.contains("frequencies")) {
        throw ConfigError("model: sines needs both 'amplitudes' and 'frequencies'");
      }
      spec.amplitudes = vector_of(m["amplitudes"], "model.amplitudes");
      spec.frequencies = vector_of(m["frequencies"], "model.frequencies");
      if (spec.amplitudes.size() != spec.frequencies.size()) {
        throw ConfigError("model: amplitudes and frequencies differ in length");
      }
    } else {
      if (!m.contains("dim")) throw ConfigError("model: sines needs amplitudes/frequencies or 'dim'");
      const Index d = count(m["dim"], "model.dim");
      SampleStream stream(model_seed(m), kRandomModelStream);
      spec.amplitudes = (random_normals(stream, d).array().abs() + 0.1).matrix();
      spec.frequencies.resize(d);
      for (Index i = 0; i < d; ++i) spec.frequencies(i) = 0.2 + 1.8 * stream.uniform();
    }
  } else if (type == "pde") {
    check_keys(m, {"type", "scenario", "grid", "alpha", "beta", "point_a", "point_b"}, "model");
    spec.kind = ModelKind::Pde;
    if (!m.contains("scenario") || !m["scenario"].is_string()) {
      throw ConfigError("model.scenario: required string");
    }
    try {
      spec.scenario.kind = pde::parse_scenario(m["scenario"].get<std::string>());
    } catch (const Error& e) {
      throw ConfigError(std::string("model.scenario: ") + e.what());
    }
    if (m.contains("grid")) spec.grid = count(m["grid"], "model.grid", 2);
    if (m.contains("alpha")) spec.scenario.alpha = number(m["alpha"], "model.alpha");
    if (m.contains("beta")) spec.scenario.beta = number(m["beta"], "model.beta");
    for (const char* key : {"point_a", "point_b"}) {
      if (!m.contains(key)) continue;
      const Vector p = vector_of(m[key], std::string("model.") + key);
      if (p.size() != 2) throw ConfigError(std::string("model.") + key + ": expected [s1, s2]");
      (std::string(key) == "point_a" ? spec.scenario.point_a : spec.scenario.point_b) = p;
    }
  } else {
    throw ConfigError("model.type: unknown model '" + type + "'");
  }
  return spec;
}

MeasureSpec parse_measure(const json& doc, ModelKind model) {
  MeasureSpec spec;
  spec.kind = model == ModelKind::Pde ? MeasureKind::SquaredExponential : MeasureKind::Standard;
  if (!doc.contains("measure")) return spec;
  const json& m = doc["measure"];
  if (!m.is_object() || !m.contains("type") || !m["type"].is_string()) {
    throw ConfigError("measure.type: required string");
  }
  const std::string type = m["type"].get<std::string>();
  if (type == "standard") {
    check_keys(m, {"type", "mean"}, "measure");
    spec.kind = MeasureKind::Standard;
  } else if (type == "diagonal") {
    check_keys(m, {"type", "mean", "variances"}, "measure");
    spec.kind = MeasureKind::Diagonal;
    if (!m.contains("variances")) throw ConfigError("measure.variances: required");
    spec.variances = vector_of(m["variances"], "measure.variances");
  } else if (type == "explicit") {
    check_keys(m, {"type", "mean", "covariance"}, "measure");
    spec.kind = MeasureKind::Explicit;
    if (!m.contains("covariance")) throw ConfigError("measure.covariance: required");
    spec.covariance = matrix_of(m["covariance"], "measure.covariance");
  } else if (type == "squared_exponential") {
    check_keys(m, {"type", "mean", "lengthscale"}, "measure");
    spec.kind = MeasureKind::SquaredExponential;
    if (model != ModelKind::Pde) throw ConfigError("measure: squared_exponential needs a pde model");
    if (m.contains("lengthscale")) spec.lengthscale = number(m["lengthscale"], "measure.lengthscale");
    if (spec.lengthscale <= 0.0) throw ConfigError("measure.lengthscale: must be positive");
  } else {
    throw ConfigError("measure.type: unknown measure '" + type + "'");
  }
  if (m.contains("mean")) spec.mean = vector_of(m["mean"], "measure.mean");
  return spec;
}

SamplingSpec parse_sampling(const json& doc) {
  SamplingSpec spec;
  if (!doc.contains("sampling")) return spec;
  const json& s = doc["sampling"];
  check_keys(s, {"K", "M", "N_val", "seed", "K_ladder", "K_ref", "replicates"}, "sampling");
  if (s.contains("K")) spec.k = count(s["K"], "sampling.K");
  if (s.contains("M")) spec.m = count_list(s["M"], "sampling.M");
  if (s.contains("N_val")) spec.n_val = count(s["N_val"], "sampling.N_val", 2);
  if (s.contains("seed")) spec.seed = seed_of(s["seed"], "sampling.seed");
  if (s.contains("K_ladder")) spec.k_ladder = count_list(s["K_ladder"], "sampling.K_ladder");
  if (s.contains("K_ref")) spec.k_ref = count(s["K_ref"], "sampling.K_ref");
  if (s.contains("replicates")) spec.replicates = count(s["replicates"], "sampling.replicates");
  return spec;
}

SobolSpec parse_sobol(const json& doc) {
  SobolSpec spec;
  if (!doc.contains("sobol")) return spec;
  const json& s = doc["sobol"];
  check_keys(s, {"groups", "N", "M_inner", "dgsm_samples"}, "sobol");
  if (s.contains("groups")) {
    if (!s["groups"].is_array() || s["groups"].empty()) {
      throw ConfigError("sobol.groups: expected a non-empty array");
    }
    for (std::size_t g = 0; g < s["groups"].size(); ++g) {
      spec.groups.push_back(
          count_list(s["groups"][g], "sobol.groups[" + std::to_string(g) + "]", 0));
    }
  }
  if (s.contains("N")) spec.outer = count(s["N"], "sobol.N", 2);
  if (s.contains("M_inner")) spec.inner = count(s["M_inner"], "sobol.M_inner");
  if (s.contains("dgsm_samples")) spec.dgsm_samples = count(s["dgsm_samples"], "sobol.dgsm_samples");
  return spec;
}

Index model_dim(const ModelSpec& m) {
  switch (m.kind) {
    case ModelKind::Linear:
    case ModelKind::Quadratic: return m.matrix.cols();
    case ModelKind::Sines: return m.amplitudes.size();
    case ModelKind::Pde: return m.grid * m.grid;
  }
  return 0;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  check_keys(doc, {"model", "measure", "sampling", "ranks", "sobol", "output_dir"}, "config");
  if (!doc.contains("model")) throw ConfigError("config: 'model' is required");
  ExperimentConfig config;
  config.model = parse_model(doc["model"]);
  config.measure = parse_measure(doc, config.model.kind);
  config.sampling = parse_sampling(doc);
  config.sobol = parse_sobol(doc);
  if (doc.contains("ranks")) config.ranks = count_list(doc["ranks"], "ranks", 0);
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) throw ConfigError("output_dir: expected a string");
    config.output_dir = doc["output_dir"].get<std::string>();
  }

  const Index d = model_dim(config.model);
  for (Index r : config.ranks) {
    if (r > d) throw ConfigError("ranks: " + std::to_string(r) + " exceeds the input dimension " + std::to_string(d));
  }
  for (const auto& g : config.sobol.groups) {
    for (Index i : g) {
      if (i >= d) throw ConfigError("sobol.groups: index " + std::to_string(i) + " out of range");
    }
  }
  const MeasureSpec& ms = config.measure;
  if (ms.mean && ms.mean->size() != d) throw ConfigError("measure.mean: length differs from the input dimension");
  if (ms.kind == MeasureKind::Diagonal && ms.variances.size() != d) {
    throw ConfigError("measure.variances: length differs from the input dimension");
  }
  if (ms.kind == MeasureKind::Explicit && (ms.covariance.rows() != d || ms.covariance.cols() != d)) {
    throw ConfigError("measure.covariance: must be d x d");
  }

  config.source = doc;
  config.source["sampling"]["seed"] = config.sampling.seed;
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(doc);
}

void override_seed(ExperimentConfig& config, std::uint64_t seed) {
  config.sampling.seed = seed;
  config.source["sampling"]["seed"] = seed;
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.source.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf.data(), 16);
}

namespace {

bool is_input_error(ErrorCode code) {
  return code == ErrorCode::InvalidArgument || code == ErrorCode::DimensionMismatch ||
         code == ErrorCode::ParseError;
}

GaussianMeasure make_measure(const MeasureSpec& spec, Index d, const pde::Mesh2D* mesh,
                             Diagnostics* diagnostics) {
  const Vector mean = spec.mean.value_or(Vector::Zero(d));
  switch (spec.kind) {
    case MeasureKind::Standard: return GaussianMeasure(mean, SpdMatrix::identity(d));
    case MeasureKind::Diagonal:
      if ((spec.variances.array() <= 0.0).any()) throw ConfigError("measure.variances: must be positive");
      return GaussianMeasure(mean, SpdMatrix::diagonal(spec.variances));
    case MeasureKind::Explicit: return GaussianMeasure(mean, SpdMatrix(spec.covariance));
    case MeasureKind::SquaredExponential:
      return GaussianMeasure(mean, pde::build_field_covariance(*mesh, spec.lengthscale, diagnostics));
  }
  throw ConfigError("measure: unsupported kind");
}

}  // namespace

Problem build_problem(const ExperimentConfig& config, Diagnostics* diagnostics) {
  const ModelSpec& ms = config.model;
  std::unique_ptr<VectorValuedModel> model;
  const pde::DiffusionModel* pde_model = nullptr;
  try {
    switch (ms.kind) {
      case ModelKind::Linear: model = std::make_unique<LinearModel>(ms.matrix); break;
      case ModelKind::Quadratic: model = std::make_unique<QuadraticFormModel>(ms.matrix); break;
      case ModelKind::Sines: model = std::make_unique<SumOfSinesModel>(ms.amplitudes, ms.frequencies); break;
      case ModelKind::Pde: {
        auto p = std::make_unique<pde::DiffusionModel>(pde::Mesh2D(ms.grid), ms.scenario);
        pde_model = p.get();
        model = std::move(p);
        break;
      }
    }
  } catch (const Error& e) {
    if (!is_input_error(e.code())) throw;
    throw ConfigError(std::string("model: ") + e.what());
  }
  const Index d = model->input_dim();
  GaussianMeasure mu = [&] {
    try {
      return make_measure(config.measure, d, pde_model ? &pde_model->mesh() : nullptr, diagnostics);
    } catch (const Error& e) {
      if (!is_input_error(e.code()) && e.code() != ErrorCode::NotPositiveDefinite) throw;
      throw ConfigError(std::string("measure: ") + e.what());
    }
  }();
  std::vector<Index> ranks = config.ranks;
  if (ranks.empty()) {
    for (Index r = 0; r <= d; ++r) ranks.push_back(r);
  }
  return Problem{std::move(model), std::move(mu), pde_model, std::move(ranks)};
}

}  // namespace ridge::cli
