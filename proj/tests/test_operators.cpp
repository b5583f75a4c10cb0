#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "symlap/operators.hpp"

using namespace symlap;

namespace {

constexpr double kPi = std::numbers::pi;

SymTensorField field(const DiscreteManifold& M, int p, std::uint64_t seed, int kmax = 2) {
  RandomFieldSpec spec;
  spec.degree = p;
  spec.seed = seed;
  spec.max_wavenumber = kmax;
  return random_field(M.grid_ptr(), spec);
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

std::vector<std::vector<int>> raw_tuples(int n, int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> t(p, 0);
  while (true) {
    out.push_back(t);
    int s = p - 1;
    while (s >= 0 && ++t[s] == n) t[s--] = 0;
    if (s < 0) break;
  }
  return out;
}

int flat_index(const std::vector<int>& t, int n) {
  int r = 0;
  for (int i : t) r = r * n + i;
  return r;
}

// B_p by explicit loops over raw index tuples.
SymTensorPointd brute_B(const SymTensorPointd& phi, const PointCurvature& pc) {
  const int n = phi.dimension(), p = phi.degree();
  const auto T = to_dense(phi);
  const Eigen::MatrixXd& gi = pc.ginv;
  DenseTensor<double> out(n, p);
  for (const auto& I : raw_tuples(n, p)) {
    double acc = 0;
    for (int k = 0; k < p; ++k)
      for (int s = 0; s < n; ++s) {
        double r_up = 0;
        for (int m = 0; m < n; ++m) r_up += gi(s, m) * pc.ricci(I[k], m);
        auto J = I;
        J[k] = s;
        acc += r_up * T.values[flat_index(J, n)];
      }
    for (int k = 0; k < p; ++k)
      for (int l = 0; l < p; ++l) {
        if (k == l) continue;
        for (int s = 0; s < n; ++s)
          for (int t = 0; t < n; ++t) {
            double R_up = 0;
            for (int a = 0; a < n; ++a)
              for (int b = 0; b < n; ++b) R_up += gi(s, a) * gi(t, b) * pc.R(I[k], a, I[l], b);
            auto J = I;
            J[k] = s;
            J[l] = t;
            acc -= R_up * T.values[flat_index(J, n)];
          }
      }
    out.values[flat_index(I, n)] = acc;
  }
  return from_dense(out);
}

SymTensorPointd random_point(int n, int p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  SymTensorPointd phi(sym_index_table(n, p));
  for (Eigen::Index e = 0; e < phi.values.size(); ++e) phi.values[e] = u(rng);
  return phi;
}

}  // namespace

TEST_CASE("metric is parallel, divergence-free and Killing") {
  const auto M = DiscreteManifold::conformal_torus({32, 32}, {1, 1}, 0.2, {1, 1});
  const auto g = M.metric_tensor();
  const double scale = max_abs(g.values);
  CHECK(max_abs(covariant_derivative(g, M).values) < 1e-10 * scale);
  CHECK(max_abs(divergence(g, M).values) < 1e-10 * scale);
  CHECK(max_abs(sym_derivative(g, M).values) < 1e-10 * scale);
  CHECK(max_abs(rough_laplacian(g, M).values) < 1e-9 * scale);
  CHECK(max_abs(yano_laplacian(g, M).values) < 1e-9 * scale);
}

TEST_CASE("flat first-order operators on a single mode") {
  const auto M = DiscreteManifold::flat_torus({16, 16}, {1, 1});
  SymTensorField phi(M.grid_ptr(), 1);
  phi.values.col(0) = M.grid().sample([](const Eigen::VectorXd& x) { return std::sin(2 * kPi * x[0]); });
  const auto cosine = M.grid().sample([](const Eigen::VectorXd& x) { return 2 * kPi * std::cos(2 * kPi * x[0]); });

  const auto D = covariant_derivative(phi, M);
  CHECK((D.values.col(D.column(0, 0)) - cosine).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(D.values.col(D.column(1, 0)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(D.values.col(D.column(0, 1)).cwiseAbs().maxCoeff() < 1e-12);

  const auto div = divergence(phi, M);
  CHECK(div.degree() == 0);
  CHECK((div.values.col(0) + cosine).cwiseAbs().maxCoeff() < 1e-12);

  const auto sd = sym_derivative(phi, M);
  CHECK(sd.degree() == 2);
  CHECK((sd.at(0)({0, 0}) - 2 * cosine[0]) == doctest::Approx(0).epsilon(1e-12));

  SymTensorField scalar(M.grid_ptr(), 0);
  CHECK_THROWS_AS(divergence(scalar, M), DegreeMismatchError);
}

TEST_CASE("constant tensors on the flat torus") {
  const auto M = DiscreteManifold::flat_torus({16, 16, 8}, {1, 2, 1});
  std::mt19937_64 rng(3);
  for (int p = 1; p <= 3; ++p) {
    const auto c = constant_field(M.grid_ptr(), random_point(3, p, rng));
    CHECK(max_abs(covariant_derivative(c, M).values) < 1e-12);
    CHECK(max_abs(sym_derivative(c, M).values) < 1e-12);
    CHECK(max_abs(weitzenbock_B(c, M).values) < 1e-10);
  }
}

TEST_CASE("rough Laplacian of a Fourier mode on a flat torus") {
  for (double Ly : {1.0, 2.0}) {
    const auto M = DiscreteManifold::flat_torus({16, 16}, {1, Ly});
    SymTensorField phi(M.grid_ptr(), 2);
    const int kx = 2, ky = 1;
    const double lambda = 4 * kPi * kPi * (kx * kx + ky * ky / (Ly * Ly));
    auto mode = [&](const Eigen::VectorXd& x) { return std::cos(2 * kPi * (kx * x[0] + ky * x[1] / Ly)); };
    for (int e = 0; e < phi.entries(); ++e) phi.values.col(e) = (e + 1.0) * M.grid().sample(mode);
    const auto L = rough_laplacian(phi, M);
    CHECK(max_abs(L.values - lambda * phi.values) < 1e-9 * lambda);
    CHECK(max_abs(yano_laplacian(phi, M).values - L.values) < 1e-9 * lambda);
  }
}

TEST_CASE("curvature endomorphism") {
  std::mt19937_64 rng(5);
  SUBCASE("constant curvature closed forms") {
    for (int n = 2; n <= 4; ++n)
      for (double kappa : {-1.0, 0.7}) {
        const auto pc = constant_curvature_model(n, kappa);
        const auto v = random_point(n, 1, rng);
        CHECK((weitzenbock_B_point(v, pc).values - (n - 1) * kappa * v.values).norm() < 1e-13);
        const auto phi = random_point(n, 2, rng);
        double tr = 0;
        for (int i = 0; i < n; ++i) tr += phi({i, i});
        auto expect = phi;
        expect.values *= 2 * n * kappa;
        for (int i = 0; i < n; ++i) expect.values[expect.table->index_of({i, i})] -= 2 * kappa * tr;
        CHECK((weitzenbock_B_point(phi, pc).values - expect.values).norm() < 1e-13);
      }
  }
  SUBCASE("brute-force oracle at curved grid nodes") {
    const auto M = DiscreteManifold::conformal_torus({12, 12, 12}, {1, 1, 1}, 0.3, {1, 1, 0});
    for (int node : {0, 77, 500}) {
      const auto pc = point_curvature(M.metric(), M.curvature(), node);
      for (int p = 1; p <= 3; ++p) {
        const auto phi = random_point(3, p, rng);
        const auto fast = weitzenbock_B_point(phi, pc);
        const auto slow = brute_B(phi, pc);
        CHECK((fast.values - slow.values).norm() < 1e-12 * std::max(1.0, slow.values.norm()));
      }
    }
  }
  SUBCASE("single-term curvature density") {
    const auto M = DiscreteManifold::conformal_torus({12, 12, 12}, {1, 1, 1}, 0.3, {0, 1, 1});
    for (int p = 1; p <= 4; ++p) {
      const auto pc = point_curvature(M.metric(), M.curvature(), 31 * p);
      const auto phi = random_point(3, p, rng);
      const double full = full_contract(weitzenbock_B_point(phi, pc), phi, pc.g) / factorial(p);
      CHECK(curvature_term_collapsed(phi, pc) == doctest::Approx(full).epsilon(1e-12));
    }
  }
}

TEST_CASE("first-order adjointness on a curved torus") {
  const auto M = DiscreteManifold::conformal_torus({32, 32}, {1, 1}, 0.2, {1, 1});
  for (int p = 1; p <= 3; ++p) {
    const auto phi = field(M, p, 10 + p);
    RandomFieldSpec spec;
    spec.degree = p;
    spec.seed = 20 + p;
    const auto xi = random_mixed_field(M.grid_ptr(), spec);
    const double lhs = global_product(covariant_derivative(phi, M), xi, M);
    const double rhs = global_product(phi, divergence(xi, M), M);
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));

    const auto psi = field(M, p + 1, 30 + p);
    const double a = global_product(sym_derivative(phi, M), psi, M);
    const double b = global_product(phi, divergence(psi, M), M);
    CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("Hodge Laplacian on 1-forms") {
  const auto F = DiscreteManifold::flat_torus({16, 16}, {1, 1});
  const auto v = field(F, 1, 8);
  CHECK(max_abs(hodge_laplacian_1forms(v, F).values - rough_laplacian(v, F).values) < 1e-9);
  CHECK_THROWS_AS(hodge_laplacian_1forms(field(F, 2, 9), F), DegreeMismatchError);

  // the Hodge Laplacian commutes with d on functions
  const auto M = DiscreteManifold::conformal_torus({32, 32}, {1, 1}, 0.1, {1, 0});
  SymTensorField f(M.grid_ptr(), 0);
  f.values.col(0) = M.grid().sample([](const Eigen::VectorXd& x) { return std::sin(2 * kPi * (x[0] + x[1])); });
  const auto df = sym_derivative(f, M);
  const auto lhs = hodge_laplacian_1forms(df, M);
  const auto rhs = sym_derivative(divergence(df, M), M);
  CHECK(max_abs(lhs.values - rhs.values) < 1e-8 * max_abs(rhs.values));
}

TEST_CASE("global products") {
  const auto F = DiscreteManifold::flat_torus({16, 16}, {1, 1});
  const auto g = F.metric_tensor();
  CHECK(global_product(g, g, F) == doctest::Approx(1.0).epsilon(1e-14));

  const auto M = DiscreteManifold::conformal_torus({16, 16}, {1, 1}, 0.3, {1, 2});
  for (int p = 1; p <= 3; ++p) {
    const auto a = field(M, p, 100 + p);
    const auto b = field(M, p, 200 + p);
    const double ab = global_product(a, b, M);
    CHECK(ab == doctest::Approx(global_product(b, a, M)).epsilon(1e-13));
    CHECK(ab * ab <= global_product(a, a, M) * global_product(b, b, M));
    CHECK(global_product(2.0 * a - b, b, M) == doctest::Approx(2 * ab - global_product(b, b, M)).epsilon(1e-12));
    CHECK(global_norm(a, M) == doctest::Approx(std::sqrt(global_product(a, a, M))));
  }
  CHECK_THROWS_AS(global_product(field(M, 1, 1), field(M, 2, 2), M), DegreeMismatchError);
}

TEST_CASE("product ledger weights") {
  const auto M = DiscreteManifold::conformal_torus({16, 16}, {1, 1}, 0.2, {1, 1});
  const auto led = product_ledger(field(M, 3, 4), M);
  CHECK(led.degree == 3);
  CHECK(led.w_grad == doctest::Approx(1.0 / 6));
  CHECK(led.w_div == doctest::Approx(1.0 / 2));
  CHECK(led.w_symd == doctest::Approx(1.0 / 24));
  CHECK(led.w_curv == doctest::Approx(1.0 / 6));
  CHECK(led.w_curv_collapsed == doctest::Approx(1.0 / 2));
  CHECK(led.curvature == doctest::Approx(led.curvature_collapsed).epsilon(1e-12));
  CHECK(led.grad_grad > 0);
}
