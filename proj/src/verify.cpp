#include "symlap/verify.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace symlap {

namespace {

std::string fingerprint(const DiscreteManifold& M, int p) { return M.label() + " p=" + std::to_string(p); }

ResidualReport tagged(ResidualReport r, const DiscreteManifold& M, int p) {
  r.fingerprint = fingerprint(M, p);
  return r;
}

void require_degree(const SymTensorField& phi, int p, const char* what) {
  if (phi.degree() != p)
    throw DegreeMismatchError(std::string(what) + ": requires degree " + std::to_string(p));
}

void require_positive_degree(const SymTensorField& phi, const char* what) {
  if (phi.degree() < 1) throw DegreeMismatchError(std::string(what) + ": requires degree >= 1");
}

double integrate(const DiscreteManifold& M, const Eigen::VectorXd& f) {
  return M.grid().weight() * M.metric().volume_density().dot(f);
}

}  // namespace

void Tolerances::set(const std::string& name, double value) {
  if (!(value > 0)) throw ConfigError("tolerance for '" + name + "' must be positive");
  if (name == "bochner") bochner = value;
  else if (name == "rough_energy") rough_energy = value;
  else if (name == "hodge_gap") hodge_gap = value;
  else if (name == "greens") greens = value;
  else if (name == "weitzenbock") weitzenbock = value;
  else if (name == "harmonicity") harmonicity = value;
  else if (name == "adjoint_gradient" || name == "adjoint_symmetric" || name == "adjoint") adjoint = value;
  else if (name == "self_adjoint") self_adjoint = value;
  else if (name == "energy") energy = value;
  else if (name == "ricci_bridge") ricci_bridge = value;
  else if (name == "geodesic_energy") geodesic_energy = value;
  else throw ConfigError("unknown tolerance name '" + name + "'");
}

ResidualReport bochner_residual(const SymTensorField& phi, const DiscreteManifold& M, double tol) {
  require_positive_degree(phi, "bochner_residual");
  const auto L = product_ledger(phi, M);
  const double lhs = L.curvature + L.symd_symd - L.div_div;
  auto r = make_report("bochner", "Bochner integral identity", lhs, L.grad_grad, lhs - L.grad_grad, L.grad_grad, tol);
  r.metric("grad_grad", L.grad_grad)
      .metric("div_div", L.div_div)
      .metric("symd_symd", L.symd_symd)
      .metric("curvature", L.curvature)
      .metric("curvature_collapsed", L.curvature_collapsed);
  return tagged(r, M, phi.degree());
}

ResidualReport rough_energy_residual(const SymTensorField& phi, const DiscreteManifold& M, double tol) {
  require_positive_degree(phi, "rough_energy_residual");
  const auto L = product_ledger(phi, M);
  const double lhs = global_product(yano_laplacian(phi, M), phi, M);
  const double rhs = L.grad_grad - L.curvature;
  return tagged(make_report("rough_energy", "Yano energy = rough energy - curvature term", lhs, rhs, lhs - rhs,
                            L.grad_grad, tol),
                M, phi.degree());
}

ResidualReport hodge_gap_residual(const SymTensorField& phi, const DiscreteManifold& M, double tol) {
  require_degree(phi, 1, "hodge_gap_residual");
  const double lhs =
      global_product(hodge_laplacian_1forms(phi, M), phi, M) - global_product(yano_laplacian(phi, M), phi, M);
  const double rhs = 2.0 * global_product(ricci_action(phi, M), phi, M);
  const MixedTensorField nabla = covariant_derivative(phi, M);
  return tagged(make_report("hodge_gap", "Hodge minus Yano energy = 2 Ricci energy", lhs, rhs, lhs - rhs,
                            global_product(nabla, nabla, M), tol),
                M, 1);
}

ResidualReport greens_residual(const SymTensorField& phi, const DiscreteManifold& M, double tol) {
  require_positive_degree(phi, "greens_residual");
  const int n = M.dimension();
  const int p = phi.degree();
  const MixedTensorField nabla = covariant_derivative(phi, M);
  const SymTensorField dphi = divergence(phi, M);
  const int E = phi.table->size();
  const Eigen::Index tail = DenseTensor<double>::raw_count(n, p - 1);

  SymTensorField X(phi.grid, 1), Y(phi.grid, 1);
  for (int node = 0; node < phi.node_count(); ++node) {
    const Eigen::MatrixXd ginv = M.metric().inverse_at(node);
    const DenseTensor<double> low = to_dense(phi.at(node));
    const DenseTensor<double> up = transform_slots(low, ginv);
    // X_i = phi^{j I} (nabla_j phi)_{i I}
    for (int j = 0; j < n; ++j) {
      const SymTensorPointd slice(phi.table, nabla.values.row(node).segment(static_cast<Eigen::Index>(j) * E, E).transpose());
      const DenseTensor<double> d = to_dense(slice);
      for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (Eigen::Index r = 0; r < tail; ++r) acc += up.values[j * tail + r] * d.values[i * tail + r];
        X.values(node, i) += acc;
      }
    }
    // Y_i = phi_{i I} nabla_j phi^{j I} = -phi_{i I} (delta phi)^I
    const DenseTensor<double> dup = transform_slots(to_dense(dphi.at(node)), ginv);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (Eigen::Index r = 0; r < tail; ++r) acc -= low.values[i * tail + r] * dup.values[r];
      Y.values(node, i) = acc;
    }
  }
  // div Z = -delta Z for 1-forms
  const Eigen::VectorXd divX = -divergence(X, M).values.col(0);
  const Eigen::VectorXd divY = -divergence(Y, M).values.col(0);
  const double ix = integrate(M, divX), iy = integrate(M, divY);
  const double scale = integrate(M, divX.cwiseAbs()) + integrate(M, divY.cwiseAbs());
  auto r = make_report("greens", "divergence theorem for the Bochner fields", ix, iy, ix - iy, scale, tol);
  r.metric("int_div_X", ix).metric("int_div_Y", iy);
  return tagged(r, M, p);
}

ResidualReport weitzenbock_residual(const SymTensorField& phi, const DiscreteManifold& M, double tol) {
  require_positive_degree(phi, "weitzenbock_residual");
  const SymTensorField diff = yano_laplacian(phi, M) - rough_laplacian(phi, M) + weitzenbock_B(phi, M);
  const double res = global_norm(diff, M);
  return tagged(make_report("weitzenbock", "Yano = rough - B_p", 0, 0, res, global_norm(phi, M), tol), M,
                phi.degree());
}

ResidualReport metric_harmonicity(const DiscreteManifold& M, double tol) {
  const SymTensorField g = M.metric_tensor();
  return tagged(make_report("harmonicity", "metric tensor is harmonic", 0, 0, global_norm(yano_laplacian(g, M), M),
                            global_norm(g, M), tol),
                M, 2);
}

ResidualReport adjointness_gradient(const SymTensorField& phi, const MixedTensorField& xi, const DiscreteManifold& M,
                                    double tol) {
  const MixedTensorField nabla = covariant_derivative(phi, M);
  const double lhs = global_product(nabla, xi, M);
  const SymTensorField dxi = divergence(xi, M);
  const double rhs = global_product(phi, dxi, M);
  const double scale = std::sqrt(global_product(nabla, nabla, M) * global_product(xi, xi, M));
  return tagged(make_report("adjoint_gradient", "nabla and delta are adjoint", lhs, rhs, lhs - rhs, scale, tol), M,
                phi.degree());
}

ResidualReport adjointness_symmetric(const SymTensorField& phi, const SymTensorField& psi, const DiscreteManifold& M,
                                     double tol) {
  if (psi.degree() != phi.degree() + 1) throw DegreeMismatchError("adjointness_symmetric: psi must have degree p + 1");
  const SymTensorField ds = sym_derivative(phi, M);
  const double lhs = global_product(ds, psi, M);
  const double rhs = global_product(phi, divergence(psi, M), M);
  const double scale = global_norm(ds, M) * global_norm(psi, M);
  return tagged(make_report("adjoint_symmetric", "delta* and delta are adjoint", lhs, rhs, lhs - rhs, scale, tol), M,
                phi.degree());
}

ResidualReport self_adjointness(const SymTensorField& phi, const SymTensorField& psi, const DiscreteManifold& M,
                                double tol) {
  const SymTensorField a = yano_laplacian(phi, M);
  const SymTensorField b = yano_laplacian(psi, M);
  const double lhs = global_product(a, psi, M);
  const double rhs = global_product(phi, b, M);
  const double scale = std::max(global_norm(a, M) * global_norm(psi, M), global_norm(phi, M) * global_norm(b, M));
  return tagged(make_report("self_adjoint", "Yano Laplacian is self-adjoint", lhs, rhs, lhs - rhs, scale, tol), M,
                phi.degree());
}

ResidualReport energy_identity(const SymTensorField& phi, const DiscreteManifold& M, double tol) {
  require_positive_degree(phi, "energy_identity");
  const SymTensorField ds = sym_derivative(phi, M);
  const SymTensorField d = divergence(phi, M);
  const double sd = global_product(ds, ds, M), dd = global_product(d, d, M);
  const double lhs = global_product(yano_laplacian(phi, M), phi, M);
  return tagged(make_report("energy", "Yano energy identity", lhs, sd - dd, lhs - (sd - dd), sd + dd, tol), M,
                phi.degree());
}

ResidualReport ricci_bridge(const SymTensorField& phi, const DiscreteManifold& M, double tol) {
  require_degree(phi, 1, "ricci_bridge");
  const SymTensorField diff =
      yano_laplacian(phi, M) - hodge_laplacian_1forms(phi, M) + 2.0 * ricci_action(phi, M);
  return tagged(make_report("ricci_bridge", "Yano = Hodge - 2 Ric on 1-forms", 0, 0, global_norm(diff, M),
                            global_norm(phi, M), tol),
                M, 1);
}

Eigen::MatrixXd trace_free_basis(int n, int p) {
  auto table = sym_index_table(n, p);
  const int E = table->size();
  if (p < 2) return Eigen::MatrixXd::Identity(E, E);
  auto low = sym_index_table(n, p - 2);
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(low->size(), E);
  std::vector<int> idx(p);
  for (int f = 0; f < low->size(); ++f) {
    const auto rest = low->entry(f);
    std::copy(rest.begin(), rest.end(), idx.begin() + 2);
    for (int a = 0; a < n; ++a) {
      idx[0] = idx[1] = a;
      T(f, table->index_of(idx)) += 1.0;
    }
  }
  const Eigen::MatrixXd K = Eigen::FullPivLU<Eigen::MatrixXd>(T).kernel();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(K);
  return qr.householderQ() * Eigen::MatrixXd::Identity(E, K.cols());
}

namespace {

struct InequalitySample {
  double lhs = 0;    // collapsed form, weight 1/(p-1)!
  double full = 0;   // full sums, weight 1/p!
  double norm2 = 0;  // <phi, phi>, weight 1/p!
};

InequalitySample inequality_sample(const SymTensorPointd& phi, const PointCurvature& pc) {
  const int p = phi.degree();
  InequalitySample s;
  s.lhs = curvature_term_collapsed(phi, pc);
  s.full = full_contract_inv(weitzenbock_B_point(phi, pc), phi, pc.ginv) / factorial(p);
  s.norm2 = full_contract_inv(phi, phi, pc.ginv) / factorial(p);
  return s;
}

SymTensorPointd random_trace_free(const Eigen::MatrixXd& basis, int n, int p, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::VectorXd c(basis.cols());
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = gauss(rng);
  return SymTensorPointd(sym_index_table(n, p), basis * c);
}

void check_model_args(int n, int p, int trials) {
  if (n < 2 || p < 1 || trials < 1) throw InvalidArgumentError("curvature inequality: need n >= 2, p >= 1, trials >= 1");
}

}  // namespace

ResidualReport curvature_inequality_check(double kappa, int n, int p, int trials, std::uint64_t seed, double slack) {
  check_model_args(n, p, trials);
  if (!(kappa < 0))
    throw HypothesisError("curvature inequality: the negativity hypothesis needs kappa < 0 (got " +
                          std::to_string(kappa) + ")");
  const PointCurvature pc = constant_curvature_model(n, kappa);
  const Curvature2ndKindSpectrum spec = curvature_operator_2nd(pc);
  if (spec.sign != CurvatureSign::Negative)
    throw HypothesisError("curvature inequality: second-kind curvature is not negative on trace-free tensors");
  const double eps = spec.epsilon;
  const double c = p * (n + p - 2) * eps;

  const Eigen::MatrixXd basis = trace_free_basis(n, p);
  std::mt19937_64 rng(seed);
  double worst_excess = -std::numeric_limits<double>::infinity();
  double tightest = std::numeric_limits<double>::infinity();
  double collapse = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto s = inequality_sample(random_trace_free(basis, n, p, rng), pc);
    const double rhs = -c * s.norm2;
    worst_excess = std::max(worst_excess, (s.lhs - rhs) / std::abs(rhs));
    tightest = std::min(tightest, -s.lhs / s.norm2);
    collapse = std::max(collapse, std::abs(s.lhs - s.full) / std::max(std::abs(s.full), 1e-300));
  }
  auto r = make_report("curvature_inequality", "curvature term bounded by -p(n+p-2) eps |phi|^2", 0, 0,
                       std::max(0.0, worst_excess), 1.0, slack);
  r.pass = worst_excess <= slack;
  r.fingerprint = "constant_curvature kappa=" + std::to_string(kappa) + " n=" + std::to_string(n) +
                  " p=" + std::to_string(p);
  r.seed = seed;
  r.metric("epsilon", eps).metric("constant", c).metric("worst_margin", -worst_excess)
      .metric("tightest_ratio", tightest).metric("collapse_residual", collapse);
  if (p >= 2) {
    const auto s = inequality_sample(metric_point(pc.g), pc);
    r.metric("trace_direction_excess", (s.lhs + c * s.norm2) / (c * s.norm2));
    r.detail = "sampled on trace-free tensors; the trace direction phi = g has zero curvature term and violates the bound";
  }
  return r;
}

double inequality_violation_search(double kappa, int n, int p, int trials, std::uint64_t seed) {
  check_model_args(n, p, trials);
  const PointCurvature pc = constant_curvature_model(n, kappa);
  const Eigen::MatrixXd basis = trace_free_basis(n, p);
  std::mt19937_64 rng(seed);
  double worst = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const auto s = inequality_sample(random_trace_free(basis, n, p, rng), pc);
    worst = std::max(worst, s.lhs / s.norm2);
  }
  return worst;
}

ResidualReport vanishing_certificate(const DiscreteManifold& M, int p, const EigenResult& eig) {
  const int n = M.dimension();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  double eps = std::numeric_limits<double>::infinity();
  int negative = 0, positive = 0, indefinite = 0, null = 0;
  for (int node = 0; node < M.grid().node_count(); ++node) {
    const auto s = curvature_operator_2nd(point_curvature(M.metric(), M.curvature(), node));
    lo = std::min(lo, s.traceless_eigenvalues.minCoeff());
    hi = std::max(hi, s.traceless_eigenvalues.maxCoeff());
    switch (s.sign) {
      case CurvatureSign::Negative: ++negative; eps = std::min(eps, s.epsilon); break;
      case CurvatureSign::Positive: ++positive; break;
      case CurvatureSign::Indefinite: ++indefinite; break;
      case CurvatureSign::Null: ++null; break;
    }
  }
  const int nodes = M.grid().node_count();
  int kernel = -1;
  try {
    kernel = eig.kernel_dimension();
  } catch (const AmbiguousKernelError&) {
  }

  ResidualReport r;
  r.name = "vanishing_certificate";
  r.tag = "no harmonic tensors under negative second-kind curvature";
  r.fingerprint = fingerprint(M, p);
  r.metric("rcirc_min", lo).metric("rcirc_max", hi).metric("nodes_negative", negative)
      .metric("nodes_positive", positive).metric("nodes_indefinite", indefinite).metric("nodes_null", null)
      .metric("kernel_dimension", kernel).metric("lambda_1", eig.eigenvalues[0]);
  std::ostringstream os;
  if (negative == nodes) {
    const double bound = p * (n + p - 2) * eps;
    const double slack = 1e-6 * std::max(1.0, eig.spectral_scale);
    r.lhs = eig.eigenvalues[0];
    r.rhs = bound;
    r.residual = std::max(0.0, bound - slack - eig.eigenvalues[0]);
    r.tolerance = slack;
    r.pass = kernel == 0 && eig.eigenvalues[0] >= bound - slack;
    r.metric("epsilon", eps);
    os << "hypothesis holds at every node (eps = " << eps << "); kernel dimension " << kernel << ", lambda_1 "
       << eig.eigenvalues[0] << " against bound " << bound;
  } else {
    r.applicable = false;
    r.pass = true;
    os << "negativity hypothesis fails at " << (nodes - negative) << " of " << nodes
       << " nodes (trace-free R-circ range [" << lo << ", " << hi << "]); no vanishing asserted, kernel dimension "
       << (kernel < 0 ? std::string("ambiguous") : std::to_string(kernel));
  }
  r.detail = os.str();
  return r;
}

ResidualReport vanishing_certificate(double kappa, int n, int p, int trials, std::uint64_t seed) {
  ResidualReport r;
  r.name = "vanishing_certificate";
  r.tag = "no harmonic tensors under negative second-kind curvature";
  r.fingerprint = "constant_curvature kappa=" + std::to_string(kappa) + " n=" + std::to_string(n) +
                  " p=" + std::to_string(p);
  r.seed = seed;
  const auto spec = curvature_operator_2nd(constant_curvature_model(n, kappa));
  r.metric("rcirc_min", spec.traceless_eigenvalues.minCoeff()).metric("rcirc_max", spec.traceless_eigenvalues.maxCoeff());
  if (spec.sign != CurvatureSign::Negative) {
    r.applicable = false;
    r.pass = true;
    r.detail = std::string("second-kind curvature is ") + to_string(spec.sign) + " on trace-free tensors; no vanishing asserted";
    return r;
  }
  const ResidualReport ineq = curvature_inequality_check(kappa, n, p, trials, seed);
  const double c = p * (n + p - 2) * spec.epsilon;
  r.residual = ineq.residual;
  r.relative = ineq.relative;
  r.tolerance = ineq.tolerance;
  r.pass = ineq.pass && c > 0;
  r.metric("epsilon", spec.epsilon).metric("constant", c).metric("worst_margin", -ineq.residual);
  std::ostringstream os;
  os << "harmonic trace-free phi would give 0 = <nabla phi, nabla phi> - <B_p phi, phi> >= <nabla phi, nabla phi> + "
     << c << " <phi, phi> > 0, a contradiction; inequality verified on " << trials << " samples";
  if (p >= 2) os << "; multiples of g stay harmonic (the trace direction is outside the bound)";
  r.detail = os.str();
  return r;
}

GeodesicState random_geodesic_start(const DiscreteManifold& M, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> gauss;
  const int n = M.dimension();
  GeodesicState s{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int a = 0; a < n; ++a) s.x[a] = u(rng) * M.grid().period(a);
  for (int a = 0; a < n; ++a) s.v[a] = gauss(rng);
  const GeodesicIntegrator gi(M.metric(), M.curvature());
  s.v /= std::sqrt(gi.energy(s));
  return s;
}

ResidualReport geodesic_energy_check(const DiscreteManifold& M, int trials, std::uint64_t seed, double h, int steps,
                                     double tol) {
  const GeodesicIntegrator gi(M.metric(), M.curvature());
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const GeodesicState s0 = random_geodesic_start(M, seed + static_cast<std::uint64_t>(t));
    const GeodesicPath path = gi.integrate(s0.x, s0.v, h, steps);
    const double e0 = gi.energy(path.front());
    for (const auto& s : path) worst = std::max(worst, std::abs(gi.energy(s) - e0));
  }
  auto r = make_report("geodesic_energy", "g(x', x') conserved along geodesics", 0, 0, worst, 1.0, tol);
  r.fingerprint = M.label();
  r.seed = seed;
  r.metric("trials", trials).metric("steps", steps).metric("h", h);
  return r;
}

ResidualReport killing_consistency(const SymTensorField& phi, const DiscreteManifold& M, int trials,
                                   std::uint64_t seed, double h, int steps) {
  require_positive_degree(phi, "killing_consistency");
  const double ratio = global_norm(sym_derivative(phi, M), M) / std::max(global_norm(phi, M), 1e-300);
  const GeodesicIntegrator gi(M.metric(), M.curvature());
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const GeodesicState s0 = random_geodesic_start(M, seed + static_cast<std::uint64_t>(t));
    worst = std::max(worst, first_integral_drift(phi, gi.integrate(s0.x, s0.v, h, steps)));
  }
  ResidualReport r;
  r.name = "killing_consistency";
  r.tag = "Killing tensors give first integrals of the geodesic flow";
  r.fingerprint = fingerprint(M, phi.degree());
  r.seed = seed;
  r.residual = worst;
  r.relative = worst;
  r.normalization = 1.0;
  r.metric("symd_ratio", ratio).metric("max_drift", worst).metric("trials", trials);
  if (ratio < 1e-8) {
    r.tolerance = 1e-6;
    r.pass = worst < 1e-6;
    r.detail = "Killing side: every drift must stay below 1e-6";
  } else if (ratio > 1e-2) {
    r.tolerance = 1e-4;
    r.pass = worst > 1e-4;
    r.detail = "non-Killing side: some drift must exceed 1e-4";
  } else {
    r.applicable = false;
    r.pass = true;
    r.detail = "||delta* phi|| / ||phi|| between 1e-8 and 1e-2: inconclusive";
  }
  return r;
}

SymTensorField suite_field(const DiscreteManifold& M, int degree, std::uint64_t seed) {
  RandomFieldSpec spec;
  spec.degree = degree;
  spec.modes = 4;
  spec.max_wavenumber = std::min(2, max_band_limited_wavenumber(M.grid()));
  spec.seed = seed;
  return random_field(M.grid_ptr(), spec);
}

std::vector<ResidualReport> run_identity_suite(const DiscreteManifold& M, const SuiteOptions& opt) {
  const int p = opt.degree;
  if (p < 1) throw InvalidArgumentError("identity suite: operators need p >= 1");
  if (opt.trials < 1) throw InvalidArgumentError("identity suite: trials must be >= 1");
  for (const auto& c : opt.checks)
    if (std::find(identity_check_names().begin(), identity_check_names().end(), c) == identity_check_names().end())
      throw InvalidArgumentError("identity suite: unknown check '" + c + "'");
  auto enabled = [&](const std::string& name) {
    return opt.checks.empty() || std::find(opt.checks.begin(), opt.checks.end(), name) != opt.checks.end();
  };
  const Tolerances& tol = opt.tolerances;
  std::vector<ResidualReport> out;

  for (const auto& name : identity_check_names()) {
    if (!enabled(name)) continue;
    const bool one_forms_only = name == "hodge_gap" || name == "ricci_bridge";
    if (one_forms_only && p != 1) {
      if (opt.checks.empty()) continue;
      ResidualReport r;
      r.name = name;
      r.applicable = false;
      r.pass = true;
      r.fingerprint = fingerprint(M, p);
      r.seed = opt.seed;
      r.detail = "defined for 1-forms only";
      out.push_back(r);
      continue;
    }
    if (name == "harmonicity") {
      auto r = metric_harmonicity(M, tol.harmonicity);
      r.seed = opt.seed;
      out.push_back(r);
      continue;
    }
    std::vector<ResidualReport> trials;
    for (int t = 0; t < opt.trials; ++t) {
      const std::uint64_t s = (opt.seed * 1000003ULL + static_cast<std::uint64_t>(t)) * 4ULL;
      const SymTensorField phi = suite_field(M, p, s);
      ResidualReport r;
      if (name == "bochner") r = bochner_residual(phi, M, tol.bochner);
      else if (name == "rough_energy") r = rough_energy_residual(phi, M, tol.rough_energy);
      else if (name == "hodge_gap") r = hodge_gap_residual(phi, M, tol.hodge_gap);
      else if (name == "greens") r = greens_residual(phi, M, tol.greens);
      else if (name == "weitzenbock") r = weitzenbock_residual(phi, M, tol.weitzenbock);
      else if (name == "adjoint_gradient") {
        RandomFieldSpec spec;
        spec.degree = p;
        spec.max_wavenumber = std::min(2, max_band_limited_wavenumber(M.grid()));
        spec.seed = s + 1;
        r = adjointness_gradient(phi, random_mixed_field(M.grid_ptr(), spec), M, tol.adjoint);
      } else if (name == "adjoint_symmetric")
        r = adjointness_symmetric(phi, suite_field(M, p + 1, s + 2), M, tol.adjoint);
      else if (name == "self_adjoint") r = self_adjointness(phi, suite_field(M, p, s + 3), M, tol.self_adjoint);
      else if (name == "energy") r = energy_identity(phi, M, tol.energy);
      else if (name == "ricci_bridge") r = ricci_bridge(phi, M, tol.ricci_bridge);
      trials.push_back(r);
    }
    ResidualReport w = worst_of(trials);
    w.seed = opt.seed;
    out.push_back(w);
  }
  return out;
}

}  // namespace symlap
