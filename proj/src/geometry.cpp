#include "symlap/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace symlap {

MetricField::MetricField(ChartGridPtr grid, const MetricFunction& g) : grid_(std::move(grid)) {
  const int n = grid_->dimension();
  components_.resize(grid_->node_count(), n * n);
  for (int node = 0; node < grid_->node_count(); ++node) {
    const Eigen::MatrixXd gx = g(grid_->point(node));
    if (gx.rows() != n || gx.cols() != n) throw DegreeMismatchError("MetricField: metric function returned wrong shape");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) components_(node, i * n + j) = 0.5 * (gx(i, j) + gx(j, i));
  }
  finalize();
}

MetricField::MetricField(ChartGridPtr grid, Eigen::MatrixXd components)
    : grid_(std::move(grid)), components_(std::move(components)) {
  const int n = grid_->dimension();
  if (components_.rows() != grid_->node_count() || components_.cols() != n * n)
    throw DegreeMismatchError("MetricField: component matrix has wrong shape");
  finalize();
}

void MetricField::finalize() {
  const int n = dimension();
  inverse_.resize(components_.rows(), n * n);
  sqrt_det_.resize(components_.rows());
  for (int node = 0; node < grid_->node_count(); ++node) {
    const Eigen::MatrixXd gx = at(node);
    Eigen::LLT<Eigen::MatrixXd> llt(gx);
    const double det = gx.determinant();
    if (llt.info() != Eigen::Success || det < kDegenerateMetricThreshold)
      throw DegenerateMetricError("MetricField: metric not positive definite at node " + std::to_string(node));
    const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) inverse_(node, i * n + j) = 0.5 * (inv(i, j) + inv(j, i));
    sqrt_det_[node] = std::sqrt(det);
  }
}

Eigen::MatrixXd MetricField::unpack(const Eigen::MatrixXd& cols, int node) const {
  const int n = dimension();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cols(node, i * n + j);
  return m;
}

double MetricField::inverse_residual() const {
  const int n = dimension();
  double worst = 0.0;
  for (int node = 0; node < grid_->node_count(); ++node)
    worst = std::max(worst, (inverse_at(node) * at(node) - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());
  return worst;
}

CurvatureData christoffel(const MetricField& g, const Differentiator& d) {
  const int n = g.dimension();
  const int nodes = g.grid().node_count();
  std::vector<Eigen::MatrixXd> dg;
  for (int a = 0; a < n; ++a) dg.push_back(d.apply_columns(g.components(), a));

  CurvatureData c;
  c.n = n;
  c.christoffel.setZero(nodes, n * n * n);
  for (int node = 0; node < nodes; ++node) {
    auto dgc = [&](int a, int i, int j) { return dg[a](node, i * n + j); };
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double acc = 0.0;
          for (int l = 0; l < n; ++l)
            acc += g.inverse_components()(node, k * n + l) * (dgc(i, j, l) + dgc(j, i, l) - dgc(l, i, j));
          c.christoffel(node, (k * n + i) * n + j) = 0.5 * acc;
        }
  }
  return c;
}

CurvatureData riemann(const MetricField& g, const Differentiator& d, CurvatureData c) {
  const int n = c.n;
  const int nodes = g.grid().node_count();
  std::vector<Eigen::MatrixXd> dG;
  for (int a = 0; a < n; ++a) dG.push_back(d.apply_columns(c.christoffel, a));

  c.riemann.setZero(nodes, n * n * n * n);
  c.ricci.setZero(nodes, n * n);
  c.scalar.setZero(nodes);
  std::vector<double> up(n * n * n * n);
  for (int node = 0; node < nodes; ++node) {
    auto G = [&](int k, int i, int j) { return c.christoffel(node, (k * n + i) * n + j); };
    // up[((m*n + j)*n + k)*n + l] = R^m_jkl
    for (int m = 0; m < n; ++m)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double v = dG[k](node, (m * n + l) * n + j) - dG[l](node, (m * n + k) * n + j);
            for (int a = 0; a < n; ++a) v += G(m, k, a) * G(a, l, j) - G(m, l, a) * G(a, k, j);
            up[((m * n + j) * n + k) * n + l] = v;
          }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double v = 0.0;
            for (int m = 0; m < n; ++m) v += g.components()(node, i * n + m) * up[((m * n + j) * n + k) * n + l];
            c.riemann(node, ((i * n + j) * n + k) * n + l) = v;
          }
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        double v = 0.0;
        for (int m = 0; m < n; ++m) v += up[((m * n + j) * n + m) * n + l];
        c.ricci(node, j * n + l) = v;
        s += g.inverse_components()(node, j * n + l) * v;
      }
    c.scalar[node] = s;
  }
  return c;
}

double CurvatureSymmetryResiduals::max() const {
  return std::max({christoffel_symmetry, first_pair, last_pair, pair_exchange, bianchi, ricci_symmetry});
}

CurvatureSymmetryResiduals symmetry_residuals(const CurvatureData& c) {
  const int n = c.n;
  CurvatureSymmetryResiduals r;
  const double scale = std::max(1.0, c.riemann.size() ? c.riemann.cwiseAbs().maxCoeff() : 0.0);
  for (int node = 0; node < c.christoffel.rows(); ++node) {
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          r.christoffel_symmetry = std::max(r.christoffel_symmetry, std::abs(c.gamma(node, k, i, j) - c.gamma(node, k, j, i)));
    if (c.riemann.size() == 0) continue;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        r.ricci_symmetry = std::max(r.ricci_symmetry, std::abs(c.ric(node, i, j) - c.ric(node, j, i)) / scale);
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const double R = c.R(node, i, j, k, l);
            r.first_pair = std::max(r.first_pair, std::abs(R + c.R(node, j, i, k, l)) / scale);
            r.last_pair = std::max(r.last_pair, std::abs(R + c.R(node, i, j, l, k)) / scale);
            r.pair_exchange = std::max(r.pair_exchange, std::abs(R - c.R(node, k, l, i, j)) / scale);
            r.bianchi = std::max(r.bianchi, std::abs(R + c.R(node, i, k, l, j) + c.R(node, i, l, j, k)) / scale);
          }
      }
  }
  return r;
}

PointCurvature point_curvature(const MetricField& g, const CurvatureData& c, int node) {
  PointCurvature pc;
  pc.g = g.at(node);
  pc.ginv = g.inverse_at(node);
  pc.riemann = c.riemann.row(node).transpose();
  const int n = c.n;
  pc.ricci.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pc.ricci(i, j) = c.ric(node, i, j);
  pc.scalar = c.scalar[node];
  return pc;
}

PointCurvature constant_curvature_model(int n, double kappa) {
  if (n < 2) throw InvalidArgumentError("constant_curvature_model: need n >= 2");
  PointCurvature pc;
  pc.g = Eigen::MatrixXd::Identity(n, n);
  pc.ginv = pc.g;
  pc.riemann.setZero(n * n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          pc.riemann[((i * n + j) * n + k) * n + l] = kappa * (pc.g(i, k) * pc.g(j, l) - pc.g(i, l) * pc.g(j, k));
  pc.ricci = (n - 1) * kappa * pc.g;
  pc.scalar = n * (n - 1) * kappa;
  return pc;
}

Eigen::MatrixXd ricci_from_riemann(const Eigen::VectorXd& riemann, const Eigen::MatrixXd& ginv) {
  const int n = static_cast<int>(ginv.rows());
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int m = 0; m < n; ++m) r(j, l) += ginv(i, m) * riemann[((i * n + j) * n + m) * n + l];
  return r;
}

const char* to_string(CurvatureSign s) {
  switch (s) {
    case CurvatureSign::Positive: return "positive";
    case CurvatureSign::Negative: return "negative";
    case CurvatureSign::Null: return "null";
    case CurvatureSign::Indefinite: return "indefinite";
  }
  return "?";
}

Curvature2ndKindSpectrum curvature_operator_2nd(const PointCurvature& pc, double sign_tolerance) {
  const int n = pc.dimension();
  if (std::abs(pc.g.determinant()) < kDegenerateMetricThreshold)
    throw DegenerateMetricError("curvature_operator_2nd: degenerate metric");
  auto table = sym_index_table(n, 2);
  const int E = table->size();

  // matrix of phi -> R_ijkl phi^{jk} in compressed covariant coordinates
  Eigen::MatrixXd A(E, E);
  for (int b = 0; b < E; ++b) {
    SymTensorPointd eb(table);
    eb.values[b] = 1.0;
    const auto up = transform_all(eb, pc.ginv);
    for (int e = 0; e < E; ++e) {
      const auto il = table->entry(e);
      double v = 0.0;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) v += pc.R(il[0], j, k, il[1]) * up.values[table->index_of({j, k})];
      A(e, b) = v;
    }
  }

  // orthonormal fiber coordinates c = L^T x, G = L L^T
  const Eigen::MatrixXd G = fiber_gram(*table, pc.ginv);
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  const Eigen::MatrixXd L = llt.matrixL();
  const Eigen::MatrixXd B = L.transpose() * A;
  const Eigen::MatrixXd Mt = L.triangularView<Eigen::Lower>().solve(B.transpose());

  Curvature2ndKindSpectrum out;
  out.fiber_matrix = Mt.transpose();
  const double norm = out.fiber_matrix.norm();
  out.self_adjoint_residual = (out.fiber_matrix - Mt).norm() / std::max(norm, 1.0);
  const Eigen::MatrixXd Ms = 0.5 * (out.fiber_matrix + Mt);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ms, Eigen::EigenvaluesOnly);
  out.eigenvalues = es.eigenvalues();

  Eigen::VectorXd u = L.transpose() * metric_point(pc.g).values;
  u.normalize();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(u);
  const Eigen::MatrixXd Q = qr.householderQ();
  const Eigen::MatrixXd complement = Q.rightCols(E - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es0(complement.transpose() * Ms * complement, Eigen::EigenvaluesOnly);
  out.traceless_eigenvalues = es0.eigenvalues();

  const double lo = out.traceless_eigenvalues.minCoeff();
  const double hi = out.traceless_eigenvalues.maxCoeff();
  if (hi < -sign_tolerance) {
    out.sign = CurvatureSign::Negative;
    out.epsilon = -hi;
  } else if (lo > sign_tolerance) {
    out.sign = CurvatureSign::Positive;
  } else if (std::abs(lo) <= sign_tolerance && std::abs(hi) <= sign_tolerance) {
    out.sign = CurvatureSign::Null;
  } else {
    out.sign = CurvatureSign::Indefinite;
  }
  return out;
}

double second_kind_quadratic_form(const PointCurvature& pc, const SymTensorPointd& phi) {
  const int n = pc.dimension();
  if (phi.degree() != 2 || phi.dimension() != n) throw DegreeMismatchError("second_kind_quadratic_form: need a 2-tensor");
  const auto up = transform_all(phi, pc.ginv);
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) acc += pc.R(i, j, k, l) * up({i, l}) * up({j, k});
  return acc;
}

GeodesicIntegrator::GeodesicIntegrator(const MetricField& g, const CurvatureData& c)
    : grid_(g.grid_ptr()), interp_(g.grid_ptr()), metric_cols_(g.components()), gamma_cols_(c.christoffel) {}

Eigen::MatrixXd GeodesicIntegrator::metric_at(const Eigen::VectorXd& x) const {
  const int n = grid_->dimension();
  const Eigen::VectorXd v = interp_.evaluate(metric_cols_, x);
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), n, n);
}

double GeodesicIntegrator::energy(const GeodesicState& s) const { return s.v.dot(metric_at(s.x) * s.v); }

Eigen::VectorXd GeodesicIntegrator::acceleration(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
  const int n = grid_->dimension();
  const Eigen::VectorXd G = interp_.evaluate(gamma_cols_, x);
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a[k] -= G[(k * n + i) * n + j] * v[i] * v[j];
  return a;
}

GeodesicPath GeodesicIntegrator::integrate(const Eigen::VectorXd& x0, const Eigen::VectorXd& v0, double h,
                                           int steps) const {
  if (steps <= 0) throw InvalidArgumentError("integrate_geodesic: step count must be positive");
  if (!(h > 0)) throw InvalidArgumentError("integrate_geodesic: step size must be positive");
  if (x0.size() != grid_->dimension() || v0.size() != grid_->dimension())
    throw DegreeMismatchError("integrate_geodesic: point/velocity dimension mismatch");
  GeodesicPath path;
  path.reserve(steps + 1);
  path.push_back({x0, v0});
  Eigen::VectorXd x = x0, v = v0;
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXd k1x = v;
    const Eigen::VectorXd k1v = acceleration(x, v);
    const Eigen::VectorXd k2x = v + 0.5 * h * k1v;
    const Eigen::VectorXd k2v = acceleration(x + 0.5 * h * k1x, k2x);
    const Eigen::VectorXd k3x = v + 0.5 * h * k2v;
    const Eigen::VectorXd k3v = acceleration(x + 0.5 * h * k2x, k3x);
    const Eigen::VectorXd k4x = v + h * k3v;
    const Eigen::VectorXd k4v = acceleration(x + h * k3x, k4x);
    x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    path.push_back({x, v});
  }
  return path;
}

double evaluate_on_velocity(const SymTensorField& phi, const TrigInterpolator& interp, const GeodesicState& s) {
  if (s.v.size() != phi.dimension()) throw DegreeMismatchError("evaluate_on_velocity: dimension mismatch");
  const Eigen::VectorXd vals = interp.evaluate(phi.values, s.x);
  const auto& t = *phi.table;
  double acc = 0.0;
  for (int e = 0; e < t.size(); ++e) {
    double term = double(t.multiplicity(e)) * vals[e];
    for (int i : t.entry(e)) term *= s.v[i];
    acc += term;
  }
  return acc;
}

double first_integral_drift(const SymTensorField& phi, const GeodesicPath& path) {
  if (path.empty()) return 0.0;
  TrigInterpolator interp(phi.grid);
  const double start = evaluate_on_velocity(phi, interp, path.front());
  double worst = 0.0;
  for (const auto& s : path) worst = std::max(worst, std::abs(evaluate_on_velocity(phi, interp, s) - start));
  return worst;
}

}  // namespace symlap
