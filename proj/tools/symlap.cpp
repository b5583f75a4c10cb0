// symlap: command-line front end for the symmetric tensor Laplacian toolkit.
//
//   symlap verify    --config run.json [--p 2] [--trials 20] [--checks bochner,greens]
//   symlap spectrum  --config run.json [--k 12]
//   symlap curvature --config run.json
//   symlap geodesic  --config run.json [--tensor metric|constant|random]
//
// Human-readable table on stdout, one JSON record per line to --out.
// Exit status: 0 all pass, 1 a check failed, 2 configuration error, 3 solver non-convergence.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "symlap/config.hpp"
#include "symlap/spectral.hpp"
#include "symlap/verify.hpp"

using namespace symlap;
using nlohmann::json;

namespace {

struct Overrides {
  std::string config;
  std::optional<int> p, k, trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scheme, out, checks, tensor;
};

RunConfig resolve(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.p) {
    if (*o.p < 1) throw ConfigError("--p: operators need p >= 1");
    c.degree = *o.p;
  }
  if (o.k) c.k = *o.k;
  if (o.trials) c.trials = *o.trials;
  if (o.seed) c.seed = *o.seed;
  if (o.scheme) {
    try {
      c.scheme = scheme_from_string(*o.scheme);
    } catch (const InvalidArgumentError& e) {
      throw ConfigError(std::string("--scheme: ") + e.what());
    }
  }
  if (o.tensor) c.geodesic_tensor = *o.tensor;
  c.validate();
  return c;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

class ReportStream {
 public:
  explicit ReportStream(std::string fingerprint) : fingerprint_(std::move(fingerprint)) {}

  void add(const ResidualReport& r) {
    json j{{"record", "check"},      {"name", r.name},
           {"tag", r.tag},           {"lhs", r.lhs},
           {"rhs", r.rhs},           {"residual", r.residual},
           {"normalization", r.normalization},
           {"relative", r.relative}, {"tolerance", r.tolerance},
           {"pass", r.pass},         {"verdict", r.verdict()},
           {"fingerprint", r.fingerprint.empty() ? fingerprint_ : r.fingerprint},
           {"config", fingerprint_}, {"seed", r.seed},
           {"detail", r.detail}};
    json m = json::object();
    for (const auto& [k, v] : r.metrics) m[k] = v;
    j["metrics"] = m;
    records_.push_back(j);
    reports_.push_back(r);
  }

  void add_record(json j) {
    j["config"] = fingerprint_;
    records_.push_back(std::move(j));
  }

  bool all_pass() const {
    for (const auto& r : reports_)
      if (r.applicable && !r.pass) return false;
    return true;
  }

  void print_table(std::ostream& os) const {
    os << std::left << std::setw(28) << "check" << std::setw(16) << "verdict" << std::setw(14) << "relative"
       << std::setw(12) << "tolerance"
       << "detail\n";
    for (const auto& r : reports_) {
      os << std::left << std::setw(28) << r.name << std::setw(16) << r.verdict() << std::setw(14)
         << std::setprecision(3) << std::scientific << r.relative << std::setw(12) << r.tolerance
         << std::defaultfloat << r.detail << "\n";
    }
    os << (all_pass() ? "all checks passed" : "some checks FAILED") << "\n";
  }

  void write(const std::optional<std::string>& path) const {
    if (!path) return;
    std::ofstream out(*path);
    if (!out) throw ConfigError("cannot open output file '" + *path + "'");
    for (const auto& j : records_) out << j.dump() << "\n";
  }

 private:
  std::string fingerprint_;
  std::vector<json> records_;
  std::vector<ResidualReport> reports_;
};

int finish(const ReportStream& rs, const Overrides& o) {
  rs.print_table(std::cout);
  rs.write(o.out);
  return rs.all_pass() ? 0 : 1;
}

int cmd_verify(const Overrides& o) {
  const RunConfig c = resolve(o);
  ReportStream rs(c.fingerprint());
  if (c.pointwise()) {
    const int samples = std::max(1000, c.trials);
    if (c.kappa < 0) {
      rs.add(curvature_inequality_check(c.kappa, c.n, c.degree, samples, c.seed));
      rs.add(vanishing_certificate(c.kappa, c.n, c.degree, samples, c.seed));
    } else {
      ResidualReport r;
      r.name = "curvature_inequality";
      r.applicable = false;
      r.pass = true;
      r.seed = c.seed;
      const double worst = inequality_violation_search(c.kappa, c.n, c.degree, samples, c.seed);
      r.metric("max_curvature_ratio", worst);
      r.detail = worst > 0 ? "hypothesis fails (kappa >= 0); a tensor with positive curvature term was found"
                           : "hypothesis fails (kappa >= 0)";
      rs.add(r);
    }
    return finish(rs, o);
  }
  const DiscreteManifold M = c.build_manifold();
  SuiteOptions opt;
  opt.degree = c.degree;
  opt.trials = c.trials;
  opt.seed = c.seed;
  opt.tolerances = c.tolerances;
  if (o.checks) opt.checks = split_list(*o.checks);
  try {
    for (const auto& r : run_identity_suite(M, opt)) rs.add(r);
  } catch (const InvalidArgumentError& e) {
    throw ConfigError(e.what());
  }
  return finish(rs, o);
}

int cmd_spectrum(const Overrides& o) {
  const RunConfig c = resolve(o);
  if (c.pointwise()) throw ConfigError("spectrum needs a grid manifold (flat_torus or conformal_torus)");
  const DiscreteManifold M = c.build_manifold();
  ReportStream rs(c.fingerprint());
  AssemblyOptions ao;
  ao.band = c.band;
  ao.dof_cap = c.dof_cap;
  const DiscreteOperator op = assemble(OperatorKind::Yano, M, c.degree, ao);
  const int k = std::min(c.k, op.reduced_dofs());
  EigenResult eig = lowest_eigenpairs(op, k);
  if (op.reduced_dofs() <= 1500) eig.max_imaginary = max_imaginary_part(op);

  std::cout << "yano spectrum, p=" << c.degree << ", trial space " << op.reduced_dofs() << " of " << op.nodal_dofs
            << " nodal DOF (band " << op.band << ", " << (eig.dense ? "dense" : "shift-invert") << " solve)\n";
  std::cout << std::setw(6) << "i" << std::setw(20) << "lambda" << std::setw(14) << "|lambda| rank" << std::setw(14)
            << "residual\n";
  std::vector<int> rank(k);
  for (int r = 0; r < k; ++r) rank[eig.magnitude_order[r]] = r;
  for (int i = 0; i < k; ++i) {
    std::cout << std::setw(6) << i << std::setw(20) << std::setprecision(12) << eig.eigenvalues[i] << std::setw(14)
              << rank[i] << std::setw(14) << std::setprecision(3) << eig.residuals[i] << "\n";
    rs.add_record({{"record", "eigenvalue"},
                   {"index", i},
                   {"value", eig.eigenvalues[i]},
                   {"magnitude_rank", rank[i]},
                   {"residual", eig.residuals[i]}});
  }

  auto res = make_report("eigen_residuals", "eigenpair residuals", 0, 0, eig.residuals.maxCoeff(), 1.0, 1e-8);
  res.seed = c.seed;
  rs.add(res);
  auto imag = make_report("imaginary_parts", "real spectrum", 0, 0, eig.max_imaginary, 1.0, 1e-10);
  imag.metric("asymmetry", op.stiffness_asymmetry);
  if (op.reduced_dofs() > 1500) {
    imag.applicable = false;
    imag.detail = "skipped above 1500 trial DOF";
  }
  rs.add(imag);

  bool kernel_ok = true;
  ResidualReport kr;
  kr.name = "kernel_dimension";
  kr.tag = "harmonic symmetric tensors";
  kr.seed = c.seed;
  try {
    const int dim = eig.kernel_dimension();
    kr.pass = true;
    kr.metric("kernel_dimension", dim).metric("threshold", eig.kernel_threshold());
    kr.detail = "kernel dimension " + std::to_string(dim);
  } catch (const AmbiguousKernelError& e) {
    kernel_ok = false;
    kr.pass = false;
    kr.detail = e.what();
  }
  rs.add(kr);
  rs.add(eigenspace_orthogonality_check(op, eig));
  if (kernel_ok) {
    std::vector<SymTensorField> samples;
    for (int s = 0; s < 3; ++s) samples.push_back(suite_field(M, c.degree, c.seed * 31 + s));
    rs.add(decomposition_check(op, eig, samples));
    rs.add(vanishing_certificate(M, c.degree, eig));
  }
  if (c.degree == 1) {
    const DiscreteOperator h = assemble(OperatorKind::HodgeMinusTwoRicci, M, 1, ao);
    const EigenResult he = lowest_eigenpairs(h, k);
    const double mismatch = eigenvalue_mismatch(eig.eigenvalues, he.eigenvalues, 1e-3 * eig.spectral_scale);
    auto r = make_report("hodge_spectrum_match", "Yano = Hodge - 2 Ric spectra", 0, 0, mismatch, 1.0, 1e-6);
    r.seed = c.seed;
    rs.add(r);
  }
  return finish(rs, o);
}

int cmd_curvature(const Overrides& o) {
  const RunConfig c = resolve(o);
  ReportStream rs(c.fingerprint());
  if (c.pointwise()) {
    const auto spec = curvature_operator_2nd(constant_curvature_model(c.n, c.kappa));
    std::cout << "second-kind curvature spectrum (full S^2 fiber): " << spec.eigenvalues.transpose() << "\n";
    std::cout << "trace-free fiber: " << spec.traceless_eigenvalues.transpose() << "\n";
    ResidualReport r = make_report("rcirc_classification", "second-kind curvature sign", 0, 0,
                                   spec.self_adjoint_residual, 1.0, 1e-10);
    r.detail = std::string("trace-free sign ") + to_string(spec.sign) +
               (spec.sign == CurvatureSign::Negative ? ", eps = " + std::to_string(spec.epsilon) : "");
    r.metric("rcirc_min", spec.eigenvalues.minCoeff()).metric("rcirc_max", spec.eigenvalues.maxCoeff())
        .metric("traceless_min", spec.traceless_eigenvalues.minCoeff())
        .metric("traceless_max", spec.traceless_eigenvalues.maxCoeff()).metric("epsilon", spec.epsilon);
    rs.add(r);
    return finish(rs, o);
  }
  const DiscreteManifold M = c.build_manifold();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, tlo = lo, thi = hi, eps = lo, asym = 0;
  int counts[4] = {0, 0, 0, 0};
  for (int node = 0; node < M.grid().node_count(); ++node) {
    const auto s = curvature_operator_2nd(point_curvature(M.metric(), M.curvature(), node));
    lo = std::min(lo, s.eigenvalues.minCoeff());
    hi = std::max(hi, s.eigenvalues.maxCoeff());
    tlo = std::min(tlo, s.traceless_eigenvalues.minCoeff());
    thi = std::max(thi, s.traceless_eigenvalues.maxCoeff());
    asym = std::max(asym, s.self_adjoint_residual);
    ++counts[static_cast<int>(s.sign)];
    if (s.sign == CurvatureSign::Negative) eps = std::min(eps, s.epsilon);
  }
  const int nodes = M.grid().node_count();
  std::cout << "second-kind curvature range over " << nodes << " nodes: [" << lo << ", " << hi << "]\n"
            << "trace-free range: [" << tlo << ", " << thi << "]\n"
            << "nodes positive/negative/null/indefinite: " << counts[0] << "/" << counts[1] << "/" << counts[2] << "/"
            << counts[3] << "\n";

  ResidualReport cls = make_report("rcirc_classification", "second-kind curvature sign", 0, 0, asym, 1.0, 1e-10);
  std::string sign = counts[1] == nodes ? "negative" : counts[0] == nodes ? "positive" : counts[2] == nodes ? "null" : "mixed";
  cls.detail = "trace-free sign " + sign + (counts[1] == nodes ? ", eps = " + std::to_string(eps) : "");
  cls.metric("rcirc_min", lo).metric("rcirc_max", hi).metric("traceless_min", tlo).metric("traceless_max", thi);
  for (int s = 0; s < 4; ++s) cls.metric(std::string("nodes_") + to_string(static_cast<CurvatureSign>(s)), counts[s]);
  rs.add(cls);

  const auto sym = symmetry_residuals(M.curvature());
  auto sr = make_report("curvature_symmetry", "curvature tensor symmetries", 0, 0, sym.max(), 1.0, 1e-8);
  sr.metric("christoffel", sym.christoffel_symmetry).metric("first_pair", sym.first_pair)
      .metric("last_pair", sym.last_pair).metric("pair_exchange", sym.pair_exchange).metric("bianchi", sym.bianchi)
      .metric("ricci", sym.ricci_symmetry);
  rs.add(sr);
  rs.add(make_report("metric_inverse", "g^{ik} g_{jk} = delta", 0, 0, M.metric().inverse_residual(), 1.0, 1e-12));
  return finish(rs, o);
}

int cmd_geodesic(const Overrides& o) {
  const RunConfig c = resolve(o);
  if (c.pointwise()) throw ConfigError("geodesic needs a grid manifold (flat_torus or conformal_torus)");
  const DiscreteManifold M = c.build_manifold();
  ReportStream rs(c.fingerprint());
  SymTensorField phi;
  if (c.geodesic_tensor == "metric") {
    phi = M.metric_tensor();
  } else if (c.geodesic_tensor == "constant") {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SymTensorPointd v(sym_index_table(M.dimension(), c.degree));
    for (Eigen::Index e = 0; e < v.values.size(); ++e) v.values[e] = u(rng);
    phi = constant_field(M.grid_ptr(), v);
  } else {
    phi = suite_field(M, c.degree, c.seed);
  }
  rs.add(geodesic_energy_check(M, c.trials, c.seed, c.geodesic_h, c.geodesic_steps, c.tolerances.geodesic_energy));
  auto kc = killing_consistency(phi, M, c.trials, c.seed, c.geodesic_h, c.geodesic_steps);
  kc.detail = "tensor=" + c.geodesic_tensor + "; " + kc.detail;
  rs.add(kc);
  return finish(rs, o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Yano Laplacian on symmetric tensor fields: identity checks, spectra, curvature, geodesics"};
  app.require_subcommand(1);
  Overrides o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run configuration");
    sub->add_option("--p", o.p, "tensor degree");
    sub->add_option("--trials", o.trials, "random fields or geodesics per check");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--scheme", o.scheme, "derivative scheme: spectral or fd4");
    sub->add_option("--out", o.out, "write JSON Lines records to this path");
  };
  auto* verify = app.add_subcommand("verify", "integral identities on random fields");
  add_common(verify);
  verify->add_option("--checks", o.checks, "comma-separated subset of checks");
  auto* spectrum = app.add_subcommand("spectrum", "lowest eigenpairs of the Yano Laplacian");
  add_common(spectrum);
  spectrum->add_option("--k", o.k, "number of eigenpairs");
  auto* curvature = app.add_subcommand("curvature", "second-kind curvature diagnostics");
  add_common(curvature);
  auto* geodesic = app.add_subcommand("geodesic", "first integrals along geodesics");
  add_common(geodesic);
  geodesic->add_option("--tensor", o.tensor, "metric, constant or random");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*verify) return cmd_verify(o);
    if (*spectrum) return cmd_spectrum(o);
    if (*curvature) return cmd_curvature(o);
    if (*geodesic) return cmd_geodesic(o);
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\nbest residuals:";
    for (double r : e.best_residuals()) std::cerr << " " << r;
    std::cerr << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const DofCapError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
