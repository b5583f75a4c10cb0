#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symlap/grid.hpp"
#include "symlap/manifold.hpp"
#include "symlap/verify.hpp"

namespace symlap {

enum class ManifoldKind { FlatTorus, ConformalTorus, ConstantCurvature };

std::string to_string(ManifoldKind kind);

/// Everything a command-line run needs. Parsed from JSON; unknown keys are errors.
///
///   {
///     "manifold": {"kind": "conformal_torus", "n": 2, "sizes": [32, 32], "periods": [1, 1],
///                  "amplitude": 0.1, "wave_vector": [1, 1]},
///     "degree": 2, "scheme": "spectral", "seed": 1, "trials": 20, "k": 8,
///     "dof_cap": 40000, "band": 0,
///     "tolerances": {"bochner": 1e-6},
///     "geodesic": {"tensor": "metric", "h": 1e-3, "steps": 1000}
///   }
///
/// "constant_curvature" takes "n" and "kappa" only (pointwise model, no grid).
struct RunConfig {
  ManifoldKind kind = ManifoldKind::FlatTorus;
  int n = 2;
  std::vector<int> sizes{16, 16};
  std::vector<double> periods{1.0, 1.0};
  double amplitude = 0.0;
  std::vector<int> wave_vector{1, 0};
  double kappa = 0.0;

  int degree = 1;
  DerivativeScheme scheme = DerivativeScheme::Spectral;
  std::uint64_t seed = 1;
  int trials = 20;
  int k = 8;
  std::int64_t dof_cap = kDefaultDofCap;
  int band = 0;
  Tolerances tolerances;

  std::string geodesic_tensor = "metric";
  double geodesic_h = 1e-3;
  int geodesic_steps = 1000;

  /// Range checks (n <= 4, p <= 4, N even >= 8, |a| <= 0.5, ...); throws ConfigError naming the field.
  void validate() const;

  bool pointwise() const { return kind == ManifoldKind::ConstantCurvature; }
  DiscreteManifold build_manifold() const;
  std::string fingerprint() const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace symlap
