#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symlap/geometry.hpp"
#include "symlap/manifold.hpp"
#include "symlap/operators.hpp"
#include "symlap/report.hpp"
#include "symlap/spectral.hpp"

namespace symlap {

/// Default tolerances of the identity checks.
struct Tolerances {
  double bochner = 1e-6;
  double rough_energy = 1e-6;
  double hodge_gap = 1e-7;
  double greens = 1e-7;
  double weitzenbock = 1e-6;
  double harmonicity = 1e-9;
  double adjoint = 1e-8;
  double self_adjoint = 1e-8;
  double energy = 1e-8;
  double ricci_bridge = 1e-6;
  double geodesic_energy = 1e-8;

  /// Overrides one tolerance by check name; unknown names throw ConfigError.
  void set(const std::string& name, double value);
};

// Integral identities, each on one field (relative residuals)

/// <B_p phi, phi> + <delta* phi, delta* phi> - <delta phi, delta phi> - <nabla phi, nabla phi>, against <nabla phi, nabla phi>.
ResidualReport bochner_residual(const SymTensorField& phi, const DiscreteManifold& M, double tol = 1e-6);

/// <Delta_sym phi, phi> against <nabla phi, nabla phi> - <B_p phi, phi>.
ResidualReport rough_energy_residual(const SymTensorField& phi, const DiscreteManifold& M, double tol = 1e-6);

/// p = 1: <Delta phi, phi> - <Delta_sym phi, phi> against 2 <Ric X, X>.
ResidualReport hodge_gap_residual(const SymTensorField& phi, const DiscreteManifold& M, double tol = 1e-7);

/// Integral of div(X - Y) with X^i = phi^{j I} nabla_j phi^i_I and Y^i = phi^i_I nabla_j phi^{j I}.
ResidualReport greens_residual(const SymTensorField& phi, const DiscreteManifold& M, double tol = 1e-7);

/// || Delta_sym phi - nabla* nabla phi + B_p phi || / || phi ||.
ResidualReport weitzenbock_residual(const SymTensorField& phi, const DiscreteManifold& M, double tol = 1e-6);

/// || Delta_sym g || / || g ||.
ResidualReport metric_harmonicity(const DiscreteManifold& M, double tol = 1e-9);

/// <nabla phi, xi> = <phi, delta xi>.
ResidualReport adjointness_gradient(const SymTensorField& phi, const MixedTensorField& xi, const DiscreteManifold& M,
                                    double tol = 1e-8);

/// <delta* phi, psi> (weight 1/(p+1)!) = <phi, delta psi> (weight 1/p!).
ResidualReport adjointness_symmetric(const SymTensorField& phi, const SymTensorField& psi, const DiscreteManifold& M,
                                     double tol = 1e-8);

ResidualReport self_adjointness(const SymTensorField& phi, const SymTensorField& psi, const DiscreteManifold& M,
                                double tol = 1e-8);

/// <Delta_sym phi, phi> = <delta* phi, delta* phi> - <delta phi, delta phi>.
ResidualReport energy_identity(const SymTensorField& phi, const DiscreteManifold& M, double tol = 1e-8);

/// p = 1: || Delta_sym phi - (Delta phi - 2 Ric phi) || / || phi ||.
ResidualReport ricci_bridge(const SymTensorField& phi, const DiscreteManifold& M, double tol = 1e-6);

// Pointwise curvature inequality

/// Trace-free symmetric p-tensors for the identity fiber metric: an orthonormal basis (columns).
Eigen::MatrixXd trace_free_basis(int n, int p);

/// For kappa < 0 on the constant-curvature model: (1/(p-1)!) collapsed <B_p phi, phi> <= -p(n+p-2) eps (1/p!) |phi|^2
/// over random trace-free phi, eps from the second-kind curvature spectrum. kappa >= 0 throws HypothesisError.
ResidualReport curvature_inequality_check(double kappa, int n, int p, int trials, std::uint64_t seed, double slack = 1e-10);

/// Largest violation of <B_p phi, phi> <= 0 (the eps -> 0 limit) over random trace-free phi; positive
/// means a violating tensor was found.
double inequality_violation_search(double kappa, int n, int p, int trials, std::uint64_t seed);

/// Grid version: per-node second-kind spectra; asserts vanishing only when R̊ < 0 on every trace-free fiber.
ResidualReport vanishing_certificate(const DiscreteManifold& M, int p, const EigenResult& eig);

/// Pointwise-model version: checks the hypothesis and the inequality chain numerically.
ResidualReport vanishing_certificate(double kappa, int n, int p, int trials, std::uint64_t seed);

// Geodesics

/// Random geodesic start data: uniform base point, velocity of unit g-length.
GeodesicState random_geodesic_start(const DiscreteManifold& M, std::uint64_t seed);

/// max |g(x', x') - initial| over `trials` random unit-speed geodesics.
ResidualReport geodesic_energy_check(const DiscreteManifold& M, int trials, std::uint64_t seed, double h = 1e-3,
                                     int steps = 1000, double tol = 1e-8);

/// Killing side (||delta* phi|| / ||phi|| < 1e-8): every drift < 1e-6. Non-Killing side (> 1e-2): some drift > 1e-4.
ResidualReport killing_consistency(const SymTensorField& phi, const DiscreteManifold& M, int trials,
                                   std::uint64_t seed, double h = 1e-3, int steps = 1000);

// Suite

inline const std::vector<std::string>& identity_check_names() {
  static const std::vector<std::string> names{"bochner",       "rough_energy",      "hodge_gap", "greens",
                                              "weitzenbock",   "harmonicity",       "adjoint_gradient",
                                              "adjoint_symmetric", "self_adjoint", "energy", "ricci_bridge"};
  return names;
}

struct SuiteOptions {
  int degree = 1;
  int trials = 20;
  std::uint64_t seed = 1;
  std::vector<std::string> checks;  // empty: all applicable
  Tolerances tolerances;
};

/// Runs the identity checks over seeded random band-limited fields; one report per check (worst trial).
std::vector<ResidualReport> run_identity_suite(const DiscreteManifold& M, const SuiteOptions& opt);

/// Random band-limited field with the suite's default mode count and wavenumber.
SymTensorField suite_field(const DiscreteManifold& M, int degree, std::uint64_t seed);

}  // namespace symlap
