#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "symlap/symtensor.hpp"

using namespace symlap;

namespace {

// All raw tuples over {0..n-1}^p, first slot most significant.
std::vector<std::vector<int>> raw_tuples(int n, int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> t(p, 0);
  while (true) {
    out.push_back(t);
    int s = p - 1;
    while (s >= 0 && ++t[s] == n) t[s--] = 0;
    if (s < 0) break;
  }
  if (p == 0) out.resize(1);
  return out;
}

std::int64_t binomial(int a, int b) {
  std::int64_t r = 1;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

SymTensorPointd random_point(int n, int p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SymTensorPointd phi(sym_index_table(n, p));
  for (Eigen::Index e = 0; e < phi.values.size(); ++e) phi.values[e] = u(rng);
  return phi;
}

Eigen::MatrixXd random_spd(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = u(rng);
  return A * A.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
}

// Raw component by sorting the tuple, read through a test-side map of sorted tuples.
double component(const SymTensorPointd& phi, std::vector<int> t) {
  std::sort(t.begin(), t.end());
  return phi.at(t);
}

// phi^{i..} psi_{i..} by brute force over raw tuples, raising with explicit metric loops.
double brute_contract(const SymTensorPointd& phi, const SymTensorPointd& psi, const Eigen::MatrixXd& ginv) {
  const int n = phi.dimension(), p = phi.degree();
  const auto tuples = raw_tuples(n, p);
  double acc = 0.0;
  for (const auto& I : tuples)
    for (const auto& J : tuples) {
      double w = 1.0;
      for (int s = 0; s < p; ++s) w *= ginv(I[s], J[s]);
      acc += w * component(phi, J) * component(psi, I);
    }
  return acc;
}

}  // namespace

TEST_CASE("sym_index_count examples") {
  CHECK(sym_index_count(2, 2) == 3);
  CHECK(sym_index_count(3, 2) == 6);
  CHECK(sym_index_count(2, 3) == 4);
  CHECK(sym_index_count(4, 0) == 1);
}

TEST_CASE("index table invariants") {
  for (int n = 2; n <= 4; ++n)
    for (int p = 0; p <= 4; ++p) {
      const auto t = sym_index_table(n, p);
      CHECK(t->size() == binomial(n + p - 1, p));
      std::int64_t total = 0;
      for (int e = 0; e < t->size(); ++e) total += t->multiplicity(e);
      CHECK(total == static_cast<std::int64_t>(std::pow(n, p)));
      std::map<std::vector<int>, int> seen;
      for (const auto& tuple : raw_tuples(n, p)) {
        std::vector<int> sorted = tuple;
        std::sort(sorted.begin(), sorted.end());
        const int e = t->index_of(tuple);
        CHECK(e == t->index_of(sorted));
        auto [it, fresh] = seen.emplace(sorted, e);
        if (!fresh) CHECK(it->second == e);
      }
      CHECK(static_cast<int>(seen.size()) == t->size());
    }
}

TEST_CASE("permuted reads return the stored value") {
  std::mt19937_64 rng(3);
  const auto phi = random_point(3, 3, rng);
  CHECK(phi({0, 1, 2}) == phi({2, 0, 1}));
  CHECK(phi({1, 2, 1}) == phi({1, 1, 2}));
  SymTensorPointd s(sym_index_table(3, 0));
  CHECK(s.values.size() == 1);
}

TEST_CASE("compressed dense round trip is exact") {
  std::mt19937_64 rng(5);
  for (int n = 2; n <= 3; ++n)
    for (int p = 1; p <= 3; ++p) {
      const auto phi = random_point(n, p, rng);
      const auto back = from_dense(to_dense(phi));
      CHECK((back.values - phi.values).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("symmetrize examples") {
  std::mt19937_64 rng(7);
  SUBCASE("symmetric input gives q T") {
    const auto phi = random_point(3, 3, rng);
    const auto s = symmetrize(to_dense(phi), false);
    CHECK((s.values - 3.0 * phi.values).norm() < 1e-13);
  }
  SUBCASE("antisymmetric 2-tensor vanishes") {
    DenseTensor<double> T(3, 2);
    T({0, 1}) = 1.5;
    T({1, 0}) = -1.5;
    T({0, 2}) = -0.25;
    T({2, 0}) = 0.25;
    CHECK(symmetrize(T, false).values.norm() == 0.0);
  }
  SUBCASE("elementary tensor") {
    DenseTensor<double> T(2, 2);
    T({0, 1}) = 1.0;
    const auto s = symmetrize(T, false);
    CHECK(s({0, 1}) == 1.0);
    CHECK(s({0, 0}) == 0.0);
    CHECK(s({1, 1}) == 0.0);
  }
  SUBCASE("normalized after unnormalized is idempotent") {
    DenseTensor<double> T(3, 3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (Eigen::Index i = 0; i < T.values.size(); ++i) T.values[i] = u(rng);
    const auto a = symmetrize(T, false);
    const auto b = symmetrize(to_dense(a), true);
    CHECK((a.values - b.values).norm() < 1e-13 * a.values.norm());
  }
  SUBCASE("table mismatch") {
    DenseTensor<double> T(2, 2);
    CHECK_THROWS_AS(symmetrize(T, false, sym_index_table(2, 3)), DegreeMismatchError);
  }
}

TEST_CASE("raise_all examples") {
  std::mt19937_64 rng(11);
  const auto phi = random_point(3, 2, rng);
  CHECK((raise_all(phi, Eigen::MatrixXd(Eigen::MatrixXd::Identity(3, 3))).values - phi.values).norm() == 0.0);
  const Eigen::MatrixXd g = 2.5 * Eigen::MatrixXd::Identity(3, 3);
  CHECK((raise_all(phi, g).values - std::pow(2.5, -2) * phi.values).norm() < 1e-15);

  SymTensorPointd v(sym_index_table(2, 1));
  v.values << 4.0, 3.0;
  Eigen::MatrixXd d(2, 2);
  d << 2.0, 0.0, 0.0, 1.0;
  const auto up = raise_all(v, d);
  CHECK(up.values[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(up.values[1] == doctest::Approx(3.0).epsilon(1e-15));

  Eigen::MatrixXd singular = Eigen::MatrixXd::Zero(2, 2);
  singular(0, 0) = 1.0;
  CHECK_THROWS_AS(raise_all(v, singular), DegenerateMetricError);
}

TEST_CASE("raise then lower is the identity on random metrics") {
  std::mt19937_64 rng(13);
  int tested = 0;
  while (tested < 20) {
    const int n = 2 + tested % 3;
    const Eigen::MatrixXd g = random_spd(n, rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    if (es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff() >= 1e3) continue;
    const auto phi = random_point(n, 1 + tested % 3, rng);
    const auto back = lower_all(raise_all(phi, g), g);
    CHECK((back.values - phi.values).norm() < 1e-12 * phi.values.norm());
    ++tested;
  }
}

TEST_CASE("full_contract against the brute-force oracle") {
  std::mt19937_64 rng(17);
  for (int n = 2; n <= 3; ++n)
    for (int p = 1; p <= 3; ++p)
      for (int t = 0; t < 3; ++t) {
        const Eigen::MatrixXd g = random_spd(n, rng);
        const auto a = random_point(n, p, rng);
        const auto b = random_point(n, p, rng);
        const double fast = full_contract(a, b, g);
        const double slow = brute_contract(a, b, g.inverse());
        CHECK(std::abs(fast - slow) <= 1e-12 * std::max(1.0, std::abs(slow)));
        CHECK(full_contract(b, a, g) == doctest::Approx(fast).epsilon(1e-12));
        CHECK(full_contract(a, a, g) > 0.0);
      }
}

TEST_CASE("full_contract examples") {
  std::mt19937_64 rng(19);
  for (int n = 2; n <= 4; ++n) {
    const Eigen::MatrixXd g = random_spd(n, rng);
    const auto gp = metric_point(g);
    CHECK(full_contract(gp, gp, g) == doctest::Approx(n).epsilon(1e-12));
  }
  const auto phi = random_point(2, 2, rng);
  const SymTensorPointd zero(phi.table);
  CHECK(full_contract(phi, zero, Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2))) == 0.0);

  // n = 2, p = 2 against all four raw tuples written out
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
  const auto psi = random_point(2, 2, rng);
  const double manual = phi({0, 0}) * psi({0, 0}) + 2.0 * phi({0, 1}) * psi({0, 1}) + phi({1, 1}) * psi({1, 1});
  CHECK(std::abs(full_contract(phi, psi, I) - manual) < 1e-14);
  CHECK_THROWS_AS(full_contract(phi, random_point(2, 1, rng), I), DegreeMismatchError);
}

TEST_CASE("fiber gram matches full_contract") {
  std::mt19937_64 rng(23);
  const Eigen::MatrixXd g = random_spd(3, rng);
  const auto t = sym_index_table(3, 2);
  const Eigen::MatrixXd G = fiber_gram(*t, g.inverse());
  const auto a = random_point(3, 2, rng);
  const auto b = random_point(3, 2, rng);
  CHECK(a.values.dot(G * b.values) == doctest::Approx(full_contract(a, b, g)).epsilon(1e-12));
}

TEST_CASE("derivation acts on every slot") {
  std::mt19937_64 rng(29);
  const auto phi = random_point(3, 2, rng);
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(3, 3);
  // identity matrix acts as multiplication by the degree
  CHECK((derivation(phi, A).values - 2.0 * phi.values).norm() < 1e-14);
}
