#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "symlap/fields.hpp"
#include "symlap/grid.hpp"

namespace symlap {

/// Metric g_ij sampled at every node, with cached inverse and volume density.
/// Component columns are laid out as i*n + j (both triangles stored).
class MetricField {
 public:
  using MetricFunction = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

  MetricField(ChartGridPtr grid, const MetricFunction& g);
  MetricField(ChartGridPtr grid, Eigen::MatrixXd components);

  const ChartGrid& grid() const { return *grid_; }
  const ChartGridPtr& grid_ptr() const { return grid_; }
  int dimension() const { return grid_->dimension(); }

  Eigen::MatrixXd at(int node) const { return unpack(components_, node); }
  Eigen::MatrixXd inverse_at(int node) const { return unpack(inverse_, node); }
  double sqrt_det(int node) const { return sqrt_det_[node]; }

  const Eigen::MatrixXd& components() const { return components_; }
  const Eigen::MatrixXd& inverse_components() const { return inverse_; }
  const Eigen::VectorXd& volume_density() const { return sqrt_det_; }

  /// max over nodes of |g^{ik} g_{jk} - delta^i_j|.
  double inverse_residual() const;

 private:
  Eigen::MatrixXd unpack(const Eigen::MatrixXd& cols, int node) const;
  void finalize();

  ChartGridPtr grid_;
  Eigen::MatrixXd components_;
  Eigen::MatrixXd inverse_;
  Eigen::VectorXd sqrt_det_;
};

/// Christoffel symbols, Riemann, Ricci and scalar curvature per node.
///   christoffel column (k*n + i)*n + j   holds Gamma^k_ij
///   riemann     column ((i*n + j)*n + k)*n + l holds R_ijkl = g_im R^m_jkl, with
///   R^m_jkl = d_k Gamma^m_lj - d_l Gamma^m_kj + Gamma^m_ka Gamma^a_lj - Gamma^m_la Gamma^a_kj
///   ricci       column i*n + j           holds r_ij = g^{kl} R_kilj
struct CurvatureData {
  int n = 0;
  Eigen::MatrixXd christoffel;
  Eigen::MatrixXd riemann;
  Eigen::MatrixXd ricci;
  Eigen::VectorXd scalar;

  double gamma(int node, int k, int i, int j) const { return christoffel(node, (k * n + i) * n + j); }
  double R(int node, int i, int j, int k, int l) const { return riemann(node, ((i * n + j) * n + k) * n + l); }
  double ric(int node, int i, int j) const { return ricci(node, i * n + j); }
};

CurvatureData christoffel(const MetricField& g, const Differentiator& d);
CurvatureData riemann(const MetricField& g, const Differentiator& d, CurvatureData gamma);

struct CurvatureSymmetryResiduals {
  double christoffel_symmetry = 0;  // Gamma^k_ij - Gamma^k_ji
  double first_pair = 0;            // R_ijkl + R_jikl
  double last_pair = 0;             // R_ijkl + R_ijlk
  double pair_exchange = 0;         // R_ijkl - R_klij
  double bianchi = 0;               // R_ijkl + R_iklj + R_iljk
  double ricci_symmetry = 0;
  double max() const;
};

/// Residuals scaled by the largest |R| (or 1 when the curvature vanishes).
CurvatureSymmetryResiduals symmetry_residuals(const CurvatureData& c);

/// Curvature at a single point (grid node or analytic model).
struct PointCurvature {
  Eigen::MatrixXd g;
  Eigen::MatrixXd ginv;
  Eigen::VectorXd riemann;  // n^4, same layout as CurvatureData::riemann
  Eigen::MatrixXd ricci;
  double scalar = 0;

  int dimension() const { return static_cast<int>(g.rows()); }
  double R(int i, int j, int k, int l) const {
    const int n = dimension();
    return riemann[((i * n + j) * n + k) * n + l];
  }
};

PointCurvature point_curvature(const MetricField& g, const CurvatureData& c, int node);

/// Identity fiber metric with R_ijkl = kappa (g_ik g_jl - g_il g_jk).
PointCurvature constant_curvature_model(int n, double kappa);

/// r_jl = g^{im} R_ijml.
Eigen::MatrixXd ricci_from_riemann(const Eigen::VectorXd& riemann, const Eigen::MatrixXd& ginv);

enum class CurvatureSign { Positive, Negative, Null, Indefinite };

const char* to_string(CurvatureSign s);

/// Spectrum of phi -> R_ijkl phi^{jk} on the symmetric 2-tensor fiber.
struct Curvature2ndKindSpectrum {
  Eigen::MatrixXd fiber_matrix;          // full S^2 fiber, orthonormal basis
  Eigen::VectorXd eigenvalues;           // sorted ascending
  Eigen::VectorXd traceless_eigenvalues; // restriction to trace-free tensors, ascending
  double self_adjoint_residual = 0;      // asymmetry of fiber_matrix over max(norm, 1)
  CurvatureSign sign = CurvatureSign::Null;  // classified on the trace-free fiber
  double epsilon = 0;                    // tightest eps with all trace-free eigenvalues <= -eps, when negative
};

Curvature2ndKindSpectrum curvature_operator_2nd(const PointCurvature& pc, double sign_tolerance = 1e-10);

/// R_ijkl phi^{il} phi^{jk} for a covariant symmetric 2-tensor.
double second_kind_quadratic_form(const PointCurvature& pc, const SymTensorPointd& phi);

/// Position and velocity along a geodesic.
struct GeodesicState {
  Eigen::VectorXd x;
  Eigen::VectorXd v;
};

using GeodesicPath = std::vector<GeodesicState>;

/// RK4 integration of x'' + Gamma(x)(x', x') = 0 with trigonometric interpolation of the
/// nodal metric and Christoffel symbols.
class GeodesicIntegrator {
 public:
  GeodesicIntegrator(const MetricField& g, const CurvatureData& c);

  GeodesicPath integrate(const Eigen::VectorXd& x0, const Eigen::VectorXd& v0, double h, int steps) const;

  Eigen::MatrixXd metric_at(const Eigen::VectorXd& x) const;
  /// g_x(v, v).
  double energy(const GeodesicState& s) const;

 private:
  Eigen::VectorXd acceleration(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const;

  ChartGridPtr grid_;
  TrigInterpolator interp_;
  Eigen::MatrixXd metric_cols_;
  Eigen::MatrixXd gamma_cols_;
};

/// phi(v, ..., v) at the point x, interpolated from the nodal field.
double evaluate_on_velocity(const SymTensorField& phi, const TrigInterpolator& interp, const GeodesicState& s);

/// max |phi(x', ..., x') - initial value| along the path.
double first_integral_drift(const SymTensorField& phi, const GeodesicPath& path);

}  // namespace symlap
