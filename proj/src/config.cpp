#include "symlap/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace symlap {

using nlohmann::json;

std::string to_string(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::FlatTorus: return "flat_torus";
    case ManifoldKind::ConformalTorus: return "conformal_torus";
    case ManifoldKind::ConstantCurvature: return "constant_curvature";
  }
  return "unknown";
}

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

template <typename T>
T read(const json& obj, const std::string& key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

ManifoldKind kind_from_string(const std::string& s) {
  for (auto k : {ManifoldKind::FlatTorus, ManifoldKind::ConformalTorus, ManifoldKind::ConstantCurvature})
    if (to_string(k) == s) return k;
  throw ConfigError("manifold.kind: expected flat_torus, conformal_torus or constant_curvature, got '" + s + "'");
}

}  // namespace

void RunConfig::validate() const {
  if (n < 2 || n > 4) throw ConfigError("manifold.n: must lie in [2, 4]");
  if (degree < 1 || degree > 4) throw ConfigError("degree: must lie in [1, 4] (operators need p >= 1)");
  if (trials < 1) throw ConfigError("trials: must be >= 1");
  if (k < 1) throw ConfigError("k: must be >= 1");
  if (dof_cap < 1) throw ConfigError("dof_cap: must be positive");
  if (band < 0) throw ConfigError("band: must be >= 0");
  if (!(geodesic_h > 0)) throw ConfigError("geodesic.h: must be positive");
  if (geodesic_steps < 1) throw ConfigError("geodesic.steps: must be >= 1");
  if (geodesic_tensor != "metric" && geodesic_tensor != "constant" && geodesic_tensor != "random")
    throw ConfigError("geodesic.tensor: expected metric, constant or random");
  if (pointwise()) return;
  if (static_cast<int>(sizes.size()) != n) throw ConfigError("manifold.sizes: needs one entry per dimension");
  if (static_cast<int>(periods.size()) != n) throw ConfigError("manifold.periods: needs one entry per dimension");
  for (int N : sizes)
    if (N < 8 || N % 2) throw ConfigError("manifold.sizes: every N must be even and >= 8");
  for (double L : periods)
    if (!(L > 0)) throw ConfigError("manifold.periods: every period must be positive");
  if (kind == ManifoldKind::ConformalTorus) {
    if (!(std::abs(amplitude) <= 0.5)) throw ConfigError("manifold.amplitude: |a| must not exceed 0.5");
    if (static_cast<int>(wave_vector.size()) != n) throw ConfigError("manifold.wave_vector: needs one entry per dimension");
  }
}

DiscreteManifold RunConfig::build_manifold() const {
  validate();
  switch (kind) {
    case ManifoldKind::FlatTorus: return DiscreteManifold::flat_torus(sizes, periods, scheme);
    case ManifoldKind::ConformalTorus:
      return DiscreteManifold::conformal_torus(sizes, periods, amplitude, wave_vector, scheme);
    case ManifoldKind::ConstantCurvature: break;
  }
  throw ConfigError("constant_curvature is a pointwise model and has no grid");
}

std::string RunConfig::fingerprint() const {
  std::ostringstream os;
  if (pointwise()) {
    os << "constant_curvature n=" << n << " kappa=" << kappa;
  } else {
    os << build_manifold().label();
  }
  os << " p=" << degree << " seed=" << seed;
  return os.str();
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(root, {"manifold", "degree", "scheme", "seed", "trials", "k", "dof_cap", "band", "tolerances", "geodesic"},
                 "config");
  RunConfig c;
  if (root.contains("manifold")) {
    const json& m = root.at("manifold");
    reject_unknown(m, {"kind", "n", "sizes", "periods", "amplitude", "wave_vector", "kappa"}, "manifold");
    c.kind = kind_from_string(read<std::string>(m, "kind", "manifold", "flat_torus"));
    c.n = read<int>(m, "n", "manifold", 2);
    if (c.pointwise()) {
      for (const char* key : {"sizes", "periods", "amplitude", "wave_vector"})
        if (m.contains(key)) throw ConfigError(std::string("manifold.") + key + ": not used by constant_curvature");
      if (!m.contains("kappa")) throw ConfigError("manifold.kappa: required for constant_curvature");
      c.kappa = read<double>(m, "kappa", "manifold", 0.0);
    } else {
      if (m.contains("kappa")) throw ConfigError("manifold.kappa: only used by constant_curvature");
      c.sizes = read<std::vector<int>>(m, "sizes", "manifold", std::vector<int>(c.n, 16));
      c.periods = read<std::vector<double>>(m, "periods", "manifold", std::vector<double>(c.n, 1.0));
      if (c.kind == ManifoldKind::ConformalTorus) {
        c.amplitude = read<double>(m, "amplitude", "manifold", 0.1);
        std::vector<int> w(c.n, 0);
        w[0] = 1;
        c.wave_vector = read<std::vector<int>>(m, "wave_vector", "manifold", w);
      } else if (m.contains("amplitude") || m.contains("wave_vector")) {
        throw ConfigError("manifold: amplitude and wave_vector apply to conformal_torus only");
      }
    }
  }
  c.degree = read<int>(root, "degree", "config", c.degree);
  try {
    c.scheme = scheme_from_string(read<std::string>(root, "scheme", "config", "spectral"));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("scheme: ") + e.what());
  }
  c.seed = read<std::uint64_t>(root, "seed", "config", c.seed);
  c.trials = read<int>(root, "trials", "config", c.trials);
  c.k = read<int>(root, "k", "config", c.k);
  c.dof_cap = read<std::int64_t>(root, "dof_cap", "config", c.dof_cap);
  c.band = read<int>(root, "band", "config", c.band);
  if (root.contains("tolerances")) {
    const json& t = root.at("tolerances");
    if (!t.is_object()) throw ConfigError("tolerances: expected an object");
    for (auto it = t.begin(); it != t.end(); ++it) {
      if (!it.value().is_number()) throw ConfigError("tolerances." + it.key() + ": expected a number");
      c.tolerances.set(it.key(), it.value().get<double>());
    }
  }
  if (root.contains("geodesic")) {
    const json& g = root.at("geodesic");
    reject_unknown(g, {"tensor", "h", "steps"}, "geodesic");
    c.geodesic_tensor = read<std::string>(g, "tensor", "geodesic", c.geodesic_tensor);
    c.geodesic_h = read<double>(g, "h", "geodesic", c.geodesic_h);
    c.geodesic_steps = read<int>(g, "steps", "geodesic", c.geodesic_steps);
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace symlap
