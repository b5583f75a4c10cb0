#include "symlap/operators.hpp"

#include <cmath>
#include <vector>

namespace symlap {

namespace {

void require_same_shape(const SymTensorField& a, const SymTensorField& b, const char* what) {
  if (a.degree() != b.degree() || a.dimension() != b.dimension() || a.node_count() != b.node_count())
    throw DegreeMismatchError(std::string(what) + ": field shapes differ");
}

void require_manifold(const SymTensorField& phi, const DiscreteManifold& M, const char* what) {
  if (phi.dimension() != M.dimension() || phi.node_count() != M.grid().node_count())
    throw DegreeMismatchError(std::string(what) + ": field does not live on this manifold");
}

Eigen::MatrixXd inverse_at(const DiscreteManifold& M, int node) { return M.metric().inverse_at(node); }

}  // namespace

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

MixedTensorField covariant_derivative(const SymTensorField& phi, const DiscreteManifold& M) {
  require_manifold(phi, M, "covariant_derivative");
  const int n = M.dimension();
  const auto& t = *phi.table;
  const int E = t.size();
  const int p = t.degree();
  const auto& c = M.curvature();
  MixedTensorField out(phi.grid, phi.table);
  for (int i = 0; i < n; ++i) {
    out.values.middleCols(static_cast<Eigen::Index>(i) * E, E) = M.diff().apply_columns(phi.values, i);
    if (p == 0) continue;
    for (int node = 0; node < phi.node_count(); ++node)
      for (int e = 0; e < E; ++e) {
        const auto idx = t.entry(e);
        double acc = 0.0;
        for (int k = 0; k < p; ++k)
          for (int m = 0; m < n; ++m) acc += c.gamma(node, m, i, idx[k]) * phi.values(node, t.replaced(e, k, m));
        out.values(node, out.column(i, e)) -= acc;
      }
  }
  return out;
}

SymTensorField divergence(const MixedTensorField& xi, const DiscreteManifold& M) {
  const int n = M.dimension();
  if (xi.dimension() != n) throw DegreeMismatchError("divergence: field does not live on this manifold");
  const auto& t = *xi.table;
  const int E = t.size();
  const int p = t.degree();
  const int nodes = M.grid().node_count();
  const auto& c = M.curvature();
  const auto& ginv = M.metric().inverse_components();

  SymTensorField out(xi.grid, xi.table);
  for (int j = 0; j < n; ++j) {
    const Eigen::MatrixXd d = M.diff().apply_columns(xi.values, j);
    for (int i = 0; i < n; ++i)
      for (int e = 0; e < E; ++e)
        out.values.col(e).array() -= ginv.col(i * n + j).array() * d.col(xi.column(i, e)).array();
  }

  Eigen::VectorXd gamma_trace(n);
  Eigen::MatrixXd A(n, n);
  for (int node = 0; node < nodes; ++node) {
    for (int m = 0; m < n; ++m) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += ginv(node, i * n + j) * c.gamma(node, m, j, i);
      gamma_trace[m] = acc;
    }
    for (int e = 0; e < E; ++e) {
      double acc = 0.0;
      for (int m = 0; m < n; ++m) acc += gamma_trace[m] * xi.values(node, xi.column(m, e));
      out.values(node, e) += acc;
    }
    if (p == 0) continue;
    for (int i = 0; i < n; ++i) {
      for (int b = 0; b < n; ++b)
        for (int m = 0; m < n; ++m) {
          double acc = 0.0;
          for (int j = 0; j < n; ++j) acc += ginv(node, i * n + j) * c.gamma(node, m, j, b);
          A(b, m) = acc;
        }
      for (int e = 0; e < E; ++e) {
        const auto idx = t.entry(e);
        double acc = 0.0;
        for (int k = 0; k < p; ++k)
          for (int m = 0; m < n; ++m) acc += A(idx[k], m) * xi.values(node, xi.column(i, t.replaced(e, k, m)));
        out.values(node, e) += acc;
      }
    }
  }
  return out;
}

MixedTensorField split_first_slot(const SymTensorField& psi) {
  const int q = psi.degree();
  if (q < 1) throw DegreeMismatchError("split_first_slot: degree must be >= 1");
  const int n = psi.dimension();
  const auto& full = *psi.table;
  auto rest = sym_index_table(n, q - 1);
  MixedTensorField out(psi.grid, rest);
  std::vector<int> idx(q);
  for (int i = 0; i < n; ++i)
    for (int e = 0; e < rest->size(); ++e) {
      idx[0] = i;
      const auto r = rest->entry(e);
      std::copy(r.begin(), r.end(), idx.begin() + 1);
      out.values.col(out.column(i, e)) = psi.values.col(full.index_of(idx));
    }
  return out;
}

SymTensorField divergence(const SymTensorField& psi, const DiscreteManifold& M) {
  require_manifold(psi, M, "divergence");
  if (psi.degree() == 0) throw DegreeMismatchError("divergence: degree-0 fields have no divergence");
  return divergence(split_first_slot(psi), M);
}

SymTensorField sym_derivative(const SymTensorField& phi, const DiscreteManifold& M) {
  const MixedTensorField nabla = covariant_derivative(phi, M);
  const int n = phi.dimension();
  const int p = phi.degree();
  auto up = sym_index_table(n, p + 1);
  SymTensorField out(phi.grid, up);
  std::vector<int> rest(p);
  for (int e = 0; e < up->size(); ++e) {
    const auto idx = up->entry(e);
    for (int k = 0; k <= p; ++k) {
      for (int s = 0, r = 0; s <= p; ++s)
        if (s != k) rest[r++] = idx[s];
      out.values.col(e) += nabla.values.col(nabla.column(idx[k], phi.table->index_of(rest)));
    }
  }
  return out;
}

SymTensorField rough_laplacian(const SymTensorField& phi, const DiscreteManifold& M) {
  return divergence(covariant_derivative(phi, M), M);
}

SymTensorPointd weitzenbock_B_point(const SymTensorPointd& phi, const PointCurvature& pc) {
  const auto& t = *phi.table;
  const int n = t.dimension();
  const int p = t.degree();
  SymTensorPointd out(phi.table);
  if (p == 0) return out;
  const Eigen::MatrixXd rmix = pc.ricci * pc.ginv;  // r_a^s
  // Rm(a, s, b, t) = R_a^s_b^t
  std::vector<double> Rm(static_cast<std::size_t>(n) * n * n * n, 0.0);
  auto rm = [&](int a, int s, int b, int u) -> double& { return Rm[((a * n + s) * n + b) * n + u]; };
  for (int a = 0; a < n; ++a)
    for (int s = 0; s < n; ++s)
      for (int b = 0; b < n; ++b)
        for (int u = 0; u < n; ++u) {
          double acc = 0.0;
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) acc += pc.ginv(s, c) * pc.ginv(u, d) * pc.R(a, c, b, d);
          rm(a, s, b, u) = acc;
        }
  std::vector<int> work(p);
  for (int e = 0; e < t.size(); ++e) {
    const auto idx = t.entry(e);
    double acc = 0.0;
    for (int k = 0; k < p; ++k)
      for (int s = 0; s < n; ++s) acc += rmix(idx[k], s) * phi.values[t.replaced(e, k, s)];
    for (int k = 0; k < p; ++k)
      for (int l = 0; l < p; ++l) {
        if (k == l) continue;
        for (int s = 0; s < n; ++s)
          for (int u = 0; u < n; ++u) {
            std::copy(idx.begin(), idx.end(), work.begin());
            work[k] = s;
            work[l] = u;
            acc -= rm(idx[k], s, idx[l], u) * phi.values[t.index_of(work)];
          }
      }
    out.values[e] = acc;
  }
  return out;
}

double curvature_term_collapsed(const SymTensorPointd& phi, const PointCurvature& pc) {
  const int n = phi.dimension();
  const int p = phi.degree();
  if (p < 1) throw DegreeMismatchError("curvature_term_collapsed: degree must be >= 1");
  const DenseTensor<double> low = to_dense(phi);
  const DenseTensor<double> up = transform_slots(low, pc.ginv);
  const Eigen::Index tail1 = DenseTensor<double>::raw_count(n, p - 1);

  // r_ij phi^{i I} phi^j_I = sum rmix(i, a) phi^{i I} phi_{a I}, rmix(i, a) = r_ij g^{ja}
  const Eigen::MatrixXd rmix = pc.ricci * pc.ginv;
  double ric = 0.0;
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      for (Eigen::Index r = 0; r < tail1; ++r) ric += rmix(i, a) * up.values[i * tail1 + r] * low.values[a * tail1 + r];

  double riem = 0.0;
  if (p >= 2) {
    const Eigen::Index tail2 = tail1 / n;
    // R_ijkl phi^{ik I} phi^{jl}_I = sum Rm(i, k, a, b) phi^{ik I} phi_{ab I}, Rm = R_ijkl g^{ja} g^{lb}
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            double rm = 0.0;
            for (int j = 0; j < n; ++j)
              for (int l = 0; l < n; ++l) rm += pc.R(i, j, k, l) * pc.ginv(j, a) * pc.ginv(l, b);
            if (rm == 0.0) continue;
            for (Eigen::Index r = 0; r < tail2; ++r)
              riem += rm * up.values[(i * n + k) * tail2 + r] * low.values[(a * n + b) * tail2 + r];
          }
  }
  return (ric - (p - 1) * riem) / factorial(p - 1);
}

namespace {

PointCurvature node_curvature(const DiscreteManifold& M, int node) {
  return point_curvature(M.metric(), M.curvature(), node);
}

}  // namespace

SymTensorField weitzenbock_B(const SymTensorField& phi, const DiscreteManifold& M) {
  require_manifold(phi, M, "weitzenbock_B");
  SymTensorField out(phi.grid, phi.table);
  if (phi.degree() == 0) return out;
  for (int node = 0; node < phi.node_count(); ++node)
    out.set(node, weitzenbock_B_point(phi.at(node), node_curvature(M, node)));
  return out;
}

SymTensorField yano_laplacian(const SymTensorField& phi, const DiscreteManifold& M) {
  require_manifold(phi, M, "yano_laplacian");
  if (phi.degree() == 0) return divergence(sym_derivative(phi, M), M);
  return divergence(sym_derivative(phi, M), M) - sym_derivative(divergence(phi, M), M);
}

SymTensorField lichnerowicz_laplacian(const SymTensorField& phi, const DiscreteManifold& M) {
  return rough_laplacian(phi, M) + weitzenbock_B(phi, M);
}

SymTensorField ricci_action(const SymTensorField& phi, const DiscreteManifold& M) {
  require_manifold(phi, M, "ricci_action");
  const auto& t = *phi.table;
  const int n = t.dimension();
  const int p = t.degree();
  SymTensorField out(phi.grid, phi.table);
  if (p == 0) return out;
  Eigen::MatrixXd ric(n, n);
  for (int node = 0; node < phi.node_count(); ++node) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) ric(i, j) = M.curvature().ric(node, i, j);
    const Eigen::MatrixXd rmix = ric * inverse_at(M, node);
    out.set(node, derivation(phi.at(node), rmix));
  }
  return out;
}

SymTensorField hodge_laplacian_1forms(const SymTensorField& phi, const DiscreteManifold& M) {
  if (phi.degree() != 1) throw DegreeMismatchError("hodge_laplacian_1forms: degree must be 1");
  return rough_laplacian(phi, M) + ricci_action(phi, M);
}

double global_product(const SymTensorField& phi, const SymTensorField& psi, const DiscreteManifold& M) {
  require_same_shape(phi, psi, "global_product");
  require_manifold(phi, M, "global_product");
  const auto& g = M.metric();
  double acc = 0.0;
  for (int node = 0; node < phi.node_count(); ++node) {
    const SymTensorPointd a = phi.at(node);
    const SymTensorPointd b = psi.at(node);
    acc += g.sqrt_det(node) * full_contract_inv(a, b, g.inverse_at(node));
  }
  return acc * M.grid().weight() / factorial(phi.degree());
}

double global_product(const MixedTensorField& xi, const MixedTensorField& eta, const DiscreteManifold& M) {
  if (xi.degree() != eta.degree() || xi.dimension() != eta.dimension() || xi.dimension() != M.dimension())
    throw DegreeMismatchError("global_product: mixed field shapes differ");
  const int n = M.dimension();
  const auto& t = *xi.table;
  const int E = t.size();
  const auto& g = M.metric();
  std::vector<SymTensorPointd> up(n);
  double acc = 0.0;
  for (int node = 0; node < M.grid().node_count(); ++node) {
    const Eigen::MatrixXd ginv = g.inverse_at(node);
    for (int i = 0; i < n; ++i)
      up[i] = transform_all(
          SymTensorPointd(xi.table, xi.values.row(node).segment(static_cast<Eigen::Index>(i) * E, E).transpose()), ginv);
    double local = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int e = 0; e < E; ++e)
          s += static_cast<double>(t.multiplicity(e)) * up[i].values[e] * eta.values(node, eta.column(j, e));
        local += ginv(i, j) * s;
      }
    acc += g.sqrt_det(node) * local;
  }
  return acc * M.grid().weight() / factorial(xi.degree());
}

double global_norm(const SymTensorField& phi, const DiscreteManifold& M) {
  return std::sqrt(std::max(0.0, global_product(phi, phi, M)));
}

GlobalProductLedger product_ledger(const SymTensorField& phi, const DiscreteManifold& M) {
  const int p = phi.degree();
  if (p < 1) throw DegreeMismatchError("product_ledger: degree must be >= 1");
  GlobalProductLedger L;
  L.degree = p;
  const MixedTensorField nabla = covariant_derivative(phi, M);
  L.grad_grad = global_product(nabla, nabla, M);
  const SymTensorField d = divergence(phi, M);
  L.div_div = global_product(d, d, M);
  const SymTensorField ds = sym_derivative(phi, M);
  L.symd_symd = global_product(ds, ds, M);
  L.curvature = global_product(weitzenbock_B(phi, M), phi, M);
  L.phi_phi = global_product(phi, phi, M);
  double collapsed = 0.0;
  for (int node = 0; node < phi.node_count(); ++node)
    collapsed += M.metric().sqrt_det(node) * curvature_term_collapsed(phi.at(node), node_curvature(M, node));
  L.curvature_collapsed = collapsed * M.grid().weight();
  L.w_grad = 1.0 / factorial(p);
  L.w_div = 1.0 / factorial(p - 1);
  L.w_symd = 1.0 / factorial(p + 1);
  L.w_curv = 1.0 / factorial(p);
  L.w_curv_collapsed = 1.0 / factorial(p - 1);
  L.w_phi = 1.0 / factorial(p);
  return L;
}

}  // namespace symlap
