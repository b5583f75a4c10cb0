#include "symlap/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace symlap {

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Yano: return "yano";
    case OperatorKind::Rough: return "rough";
    case OperatorKind::Hodge1: return "hodge1";
    case OperatorKind::HodgeMinusTwoRicci: return "hodge1_minus_2ric";
    case OperatorKind::RicciAction: return "ricci";
  }
  return "unknown";
}

OperatorKind operator_kind_from_string(const std::string& name) {
  for (auto k : {OperatorKind::Yano, OperatorKind::Rough, OperatorKind::Hodge1, OperatorKind::HodgeMinusTwoRicci,
                 OperatorKind::RicciAction})
    if (to_string(k) == name) return k;
  throw InvalidArgumentError("unknown operator kind '" + name + "'");
}

SymTensorField apply_operator(OperatorKind kind, const SymTensorField& phi, const DiscreteManifold& M) {
  switch (kind) {
    case OperatorKind::Yano: return yano_laplacian(phi, M);
    case OperatorKind::Rough: return rough_laplacian(phi, M);
    case OperatorKind::Hodge1: return hodge_laplacian_1forms(phi, M);
    case OperatorKind::HodgeMinusTwoRicci: return hodge_laplacian_1forms(phi, M) - 2.0 * ricci_action(phi, M);
    case OperatorKind::RicciAction: return ricci_action(phi, M);
  }
  throw InvalidArgumentError("apply_operator: unknown kind");
}

namespace {

/// Real trigonometric modes with |k_a| <= K, orthonormal under the grid quadrature.
Eigen::MatrixXd trig_modes(const ChartGrid& grid, int K) {
  const int n = grid.dimension();
  std::vector<std::vector<int>> waves;
  std::vector<int> k(n, -K);
  while (true) {
    int first = 0;
    for (int a = 0; a < n && first == 0; ++a) first = k[a];
    if (first >= 0) waves.push_back(k);
    int a = 0;
    while (a < n && ++k[a] > K) k[a++] = -K;
    if (a == n) break;
  }
  std::sort(waves.begin(), waves.end(), [](const auto& u, const auto& v) {
    auto norm = [](const auto& w) { return std::inner_product(w.begin(), w.end(), w.begin(), 0); };
    return norm(u) != norm(v) ? norm(u) < norm(v) : u < v;
  });

  const int nodes = grid.node_count();
  std::vector<Eigen::VectorXd> cols;
  const double two_pi = 2.0 * std::numbers::pi;
  for (const auto& w : waves) {
    Eigen::VectorXd c(nodes), s(nodes);
    bool zero = std::all_of(w.begin(), w.end(), [](int x) { return x == 0; });
    for (int node = 0; node < nodes; ++node) {
      double theta = 0.0;
      for (int a = 0; a < n; ++a) theta += two_pi * w[a] * grid.coordinate(node, a) / grid.period(a);
      c[node] = std::cos(theta);
      s[node] = std::sin(theta);
    }
    cols.push_back(c / std::sqrt(grid.weight() * c.squaredNorm()));
    if (!zero) cols.push_back(s / std::sqrt(grid.weight() * s.squaredNorm()));
  }
  Eigen::MatrixXd out(nodes, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = cols[j];
  return out;
}

Eigen::MatrixXd apply_mass_blocks(const std::vector<Eigen::MatrixXd>& blocks, const Eigen::MatrixXd& X) {
  const Eigen::Index E = blocks.front().rows();
  Eigen::MatrixXd Y(X.rows(), X.cols());
  for (std::size_t node = 0; node < blocks.size(); ++node) {
    const Eigen::Index r = static_cast<Eigen::Index>(node) * E;
    Y.middleRows(r, E).noalias() = blocks[node] * X.middleRows(r, E);
  }
  return Y;
}

double max_residual(const Eigen::VectorXd& r) { return r.size() ? r.maxCoeff() : 0.0; }

struct Pairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  bool dense = true;
};

Eigen::VectorXd pair_residuals(const Eigen::MatrixXd& K, const Eigen::MatrixXd& Mr, const Pairs& pr) {
  Eigen::VectorXd res(pr.values.size());
  for (Eigen::Index i = 0; i < pr.values.size(); ++i) {
    const auto c = pr.vectors.col(i);
    res[i] = (K * c - pr.values[i] * (Mr * c)).norm() / std::max(c.norm(), 1e-300);
  }
  return res;
}

Pairs dense_pairs(const Eigen::MatrixXd& K, const Eigen::MatrixXd& Mr, int k) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Mr, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense generalized eigensolve failed", {});
  return {es.eigenvalues().head(k), es.eigenvectors().leftCols(k), true};
}

/// Shift-invert block subspace iteration with Rayleigh-Ritz. The shift is placed below
/// the whole spectrum, certified by a successful Cholesky factorization of K - sigma Mr.
Pairs iterative_pairs(const Eigen::MatrixXd& K, const Eigen::MatrixXd& Mr, int k) {
  const Eigen::Index r = K.rows();
  const double scale = std::max(K.diagonal().cwiseAbs().maxCoeff() / Mr.diagonal().minCoeff(), 1.0);
  double s = 1e-3 * scale;
  Eigen::LLT<Eigen::MatrixXd> shifted;
  for (int attempt = 0; attempt < 60; ++attempt, s *= 4.0) {
    shifted.compute(K + s * Mr);
    if (shifted.info() == Eigen::Success) break;
  }
  if (shifted.info() != Eigen::Success) throw ConvergenceError("no shift below the spectrum found", {});

  const Eigen::Index b = std::min<Eigen::Index>(r, std::max(2 * k, k + 8));
  std::mt19937_64 rng(20240607);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd X(r, b);
  for (Eigen::Index j = 0; j < b; ++j)
    for (Eigen::Index i = 0; i < r; ++i) X(i, j) = gauss(rng);

  const double tol = 1e-10 * scale;
  Eigen::VectorXd best = Eigen::VectorXd::Constant(k, std::numeric_limits<double>::infinity());
  for (int it = 0; it < 500; ++it) {
    Eigen::MatrixXd Y = shifted.solve(Mr * X);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(r, b);
    const Eigen::MatrixXd Kp = Q.transpose() * K * Q;
    const Eigen::MatrixXd Mp = Q.transpose() * Mr * Q;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Kp + Kp.transpose()),
                                                                 0.5 * (Mp + Mp.transpose()));
    X = Q * es.eigenvectors();
    Pairs pr{es.eigenvalues().head(k), X.leftCols(k), false};
    const Eigen::VectorXd res = pair_residuals(K, Mr, pr);
    best = best.cwiseMin(res);
    if (max_residual(res) < tol) return pr;
  }
  throw ConvergenceError("shift-invert subspace iteration hit its iteration cap",
                         std::vector<double>(best.data(), best.data() + best.size()));
}

}  // namespace

Eigen::VectorXd DiscreteOperator::apply(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return flatten(apply_operator(kind, unflatten(manifold->grid_ptr(), table, x), *manifold));
}

Eigen::VectorXd DiscreteOperator::apply_mass(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return apply_mass_blocks(mass_blocks, x);
}

double DiscreteOperator::product(const Eigen::Ref<const Eigen::VectorXd>& x,
                                 const Eigen::Ref<const Eigen::VectorXd>& y) const {
  return x.dot(apply_mass(y));
}

SymTensorField DiscreteOperator::field(const Eigen::Ref<const Eigen::VectorXd>& coefficients) const {
  return unflatten(manifold->grid_ptr(), table, basis * coefficients);
}

Eigen::VectorXd DiscreteOperator::project(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return mass_factor.solve(basis.transpose() * apply_mass(x));
}

DiscreteOperator assemble(OperatorKind kind, const DiscreteManifold& M, int p, const AssemblyOptions& opt) {
  if (p < 0) throw DegreeMismatchError("assemble: degree must be >= 0");
  if ((kind == OperatorKind::Hodge1 || kind == OperatorKind::HodgeMinusTwoRicci) && p != 1)
    throw DegreeMismatchError("assemble: the Hodge Laplacian is implemented for 1-forms only");
  const ChartGrid& grid = M.grid();
  const int n = grid.dimension();

  DiscreteOperator op;
  op.kind = kind;
  op.manifold = &M;
  op.table = sym_index_table(n, p);
  const int E = op.table->size();
  op.nodal_dofs = static_cast<std::int64_t>(grid.node_count()) * E;
  if (op.nodal_dofs > opt.dof_cap)
    throw DofCapError("assemble: " + std::to_string(op.nodal_dofs) + " degrees of freedom exceed the cap of " +
                      std::to_string(opt.dof_cap) + "; use a coarser grid");

  int nmin = grid.size(0);
  for (int a = 1; a < n; ++a) nmin = std::min(nmin, grid.size(a));
  op.band = opt.band > 0 ? opt.band : nmin / 3;
  if (op.band > nmin / 2 - 1)
    throw InvalidArgumentError("assemble: band " + std::to_string(op.band) + " reaches the Nyquist wavenumber");

  const double w = grid.weight() / factorial(p);
  op.mass_blocks.resize(grid.node_count());
  for (int node = 0; node < grid.node_count(); ++node)
    op.mass_blocks[node] = w * M.metric().sqrt_det(node) * fiber_gram(*op.table, M.metric().inverse_at(node));

  const Eigen::MatrixXd modes = trig_modes(grid, op.band);
  const Eigen::Index r = modes.cols() * E;
  op.basis = Eigen::MatrixXd::Zero(op.nodal_dofs, r);
  for (Eigen::Index m = 0; m < modes.cols(); ++m)
    for (int e = 0; e < E; ++e)
      for (int node = 0; node < grid.node_count(); ++node)
        op.basis(static_cast<Eigen::Index>(node) * E + e, m * E + e) = modes(node, m);

  Eigen::MatrixXd AV(op.nodal_dofs, r);
  SymTensorField column(M.grid_ptr(), op.table);
  for (Eigen::Index m = 0; m < modes.cols(); ++m)
    for (int e = 0; e < E; ++e) {
      column.values.setZero();
      column.values.col(e) = modes.col(m);
      AV.col(m * E + e) = flatten(apply_operator(kind, column, M));
    }

  const Eigen::MatrixXd MV = apply_mass_blocks(op.mass_blocks, op.basis);
  op.stiffness_raw = MV.transpose() * AV;
  op.reduced_mass = MV.transpose() * op.basis;
  op.reduced_mass = 0.5 * (op.reduced_mass + op.reduced_mass.transpose()).eval();
  const double knorm = std::max(op.stiffness_raw.norm(), 1e-300);
  op.stiffness_asymmetry = (op.stiffness_raw - op.stiffness_raw.transpose()).norm() / knorm;
  op.stiffness = 0.5 * (op.stiffness_raw + op.stiffness_raw.transpose());
  op.mass_factor.compute(op.reduced_mass);
  if (op.mass_factor.info() != Eigen::Success) throw DegenerateMetricError("assemble: mass matrix is not definite");

  if (opt.nodal_matrix) {
    if (op.nodal_dofs > kDenseSolverLimit)
      throw DofCapError("assemble: nodal matrix requested above " + std::to_string(kDenseSolverLimit) + " DOF");
    Eigen::MatrixXd A(op.nodal_dofs, op.nodal_dofs);
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(op.nodal_dofs);
    for (Eigen::Index j = 0; j < op.nodal_dofs; ++j) {
      unit[j] = 1.0;
      A.col(j) = op.apply(unit);
      unit[j] = 0.0;
    }
    op.nodal = std::move(A);
  }
  return op;
}

double assembly_probe_residual(const DiscreteOperator& op, int probes, std::uint64_t seed) {
  if (!op.nodal) throw InvalidArgumentError("assembly_probe_residual: nodal matrix was not assembled");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < probes; ++t) {
    Eigen::VectorXd x(op.nodal_dofs);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = u(rng);
    const Eigen::VectorXd direct = op.apply(x);
    const Eigen::VectorXd assembled = *op.nodal * x;
    worst = std::max(worst, (assembled - direct).cwiseAbs().maxCoeff() /
                                std::max(direct.cwiseAbs().maxCoeff(), 1e-300));
  }
  return worst;
}

double max_imaginary_part(const DiscreteOperator& op) {
  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(op.stiffness_raw, op.reduced_mass, false);
  double worst = 0.0;
  const auto& alphas = ges.alphas();
  const auto& betas = ges.betas();
  for (Eigen::Index i = 0; i < alphas.size(); ++i)
    if (std::abs(betas[i]) > 0) worst = std::max(worst, std::abs(alphas[i].imag() / betas[i]));
  return worst;
}

double EigenResult::kernel_threshold() const { return 1e-7 * spectral_scale; }

int EigenResult::kernel_dimension(double threshold) const {
  const double thr = threshold < 0 ? kernel_threshold() : threshold;
  int count = 0;
  while (count < this->count() && std::abs(eigenvalues[magnitude_order[count]]) < thr) ++count;
  if (count == this->count())
    throw AmbiguousKernelError("kernel_dimension: every computed eigenvalue is below the threshold; request more");
  const double next = std::abs(eigenvalues[magnitude_order[count]]);
  if (next <= 10.0 * thr)
    throw AmbiguousKernelError("kernel_dimension: no spectral gap above the threshold (next |lambda| = " +
                               std::to_string(next) + "); refine the grid");
  return count;
}

EigenResult lowest_eigenpairs(const DiscreteOperator& op, int k, int dense_limit) {
  const int r = op.reduced_dofs();
  if (k < 1 || k > r) throw InvalidArgumentError("lowest_eigenpairs: k must lie in [1, " + std::to_string(r) + "]");
  const Pairs pr = r <= dense_limit ? dense_pairs(op.stiffness, op.reduced_mass, k)
                                          : iterative_pairs(op.stiffness, op.reduced_mass, k);
  EigenResult out;
  out.dense = pr.dense;
  out.eigenvalues = pr.values;
  out.coefficients = pr.vectors;
  out.residuals = pair_residuals(op.stiffness, op.reduced_mass, pr);
  out.magnitude_order.resize(k);
  std::iota(out.magnitude_order.begin(), out.magnitude_order.end(), 0);
  std::stable_sort(out.magnitude_order.begin(), out.magnitude_order.end(),
                   [&](int a, int b) { return std::abs(pr.values[a]) < std::abs(pr.values[b]); });
  out.spectral_scale = pr.values.cwiseAbs().maxCoeff();
  for (int i = 0; i < k; ++i) out.fields.push_back(op.field(pr.vectors.col(i)));
  return out;
}

ResidualReport eigenspace_orthogonality_check(const DiscreteOperator& op, const EigenResult& result) {
  double worst = 0.0;
  int pairs = 0;
  const Eigen::MatrixXd G = result.coefficients.transpose() * op.reduced_mass * result.coefficients;
  for (int i = 0; i < result.count(); ++i)
    for (int j = i + 1; j < result.count(); ++j) {
      const double li = result.eigenvalues[i], lj = result.eigenvalues[j];
      if (std::abs(li - lj) <= 1e-6 * std::max({1.0, std::abs(li), std::abs(lj)})) continue;
      ++pairs;
      worst = std::max(worst, std::abs(G(i, j)));
    }
  ResidualReport rep = make_report("eigenspace_orthogonality", "distinct eigenvalues, orthogonal eigentensors", 0, 0,
                                   worst, 1.0, 1e-8);
  rep.metric("distinct_pairs", pairs);
  if (pairs == 0) {
    rep.applicable = false;
    rep.detail = "fewer than two distinct eigenvalues computed";
  }
  return rep;
}

namespace {

Eigen::VectorXd kernel_projection(const DiscreteOperator& op, const EigenResult& result, const Eigen::VectorXd& x,
                                  int dim) {
  Eigen::VectorXd P = Eigen::VectorXd::Zero(x.size());
  const Eigen::VectorXd Mx = op.apply_mass(x);
  for (int i = 0; i < dim; ++i) {
    const Eigen::VectorXd phi = op.basis * result.coefficients.col(result.magnitude_order[i]);
    P += phi.dot(Mx) * phi;
  }
  return P;
}

}  // namespace

double kernel_projection_ratio(const DiscreteOperator& op, const EigenResult& result, const SymTensorField& phi) {
  const Eigen::VectorXd x = flatten(phi);
  const Eigen::VectorXd P = kernel_projection(op, result, x, result.kernel_dimension());
  return std::sqrt(op.product(P, P) / std::max(op.product(x, x), 1e-300));
}

ResidualReport decomposition_check(const DiscreteOperator& op, const EigenResult& result,
                                   const std::vector<SymTensorField>& samples) {
  const int dim = result.kernel_dimension();
  double worst = 0.0;
  for (const auto& s : samples) {
    const Eigen::VectorXd x = flatten(s);
    const double xx = std::max(op.product(x, x), 1e-300);
    const Eigen::VectorXd P = kernel_projection(op, result, x, dim);
    const Eigen::VectorXd image = x - P;
    worst = std::max(worst, std::abs(op.product(P, image)) / xx);
    const Eigen::VectorXd Mi = op.apply_mass(image);
    for (int i = 0; i < dim; ++i) {
      const Eigen::VectorXd phi = op.basis * result.coefficients.col(result.magnitude_order[i]);
      worst = std::max(worst, std::abs(phi.dot(Mi)) / std::sqrt(xx));
    }
  }
  ResidualReport rep =
      make_report("decomposition", "kernel plus image splitting", 0, 0, worst, 1.0, 1e-8);
  rep.metric("kernel_dimension", dim).metric("samples", static_cast<double>(samples.size()));
  return rep;
}

double eigenvalue_mismatch(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double floor) {
  if (a.size() != b.size()) throw InvalidArgumentError("eigenvalue_mismatch: lengths differ");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max({std::abs(a[i]), std::abs(b[i]), floor}));
  return worst;
}

}  // namespace symlap
