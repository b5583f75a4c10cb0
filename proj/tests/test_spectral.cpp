#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "symlap/spectral.hpp"

using namespace symlap;

namespace {

constexpr double kPi = std::numbers::pi;

// Flat-torus spectrum of nabla* nabla on p-tensors: 4 pi^2 |k/L|^2, once per fiber entry.
std::vector<double> flat_oracle(const std::vector<double>& L, int band, int entries, int count) {
  std::vector<double> out;
  for (int a = -band; a <= band; ++a)
    for (int b = -band; b <= band; ++b) {
      const double lam = 4 * kPi * kPi * (a * a / (L[0] * L[0]) + b * b / (L[1] * L[1]));
      for (int e = 0; e < entries; ++e) out.push_back(lam);
    }
  std::sort(out.begin(), out.end());
  out.resize(count);
  return out;
}

SymTensorField sample(const DiscreteManifold& M, int p, std::uint64_t seed) {
  RandomFieldSpec spec;
  spec.degree = p;
  spec.seed = seed;
  return random_field(M.grid_ptr(), spec);
}

}  // namespace

TEST_CASE("operator names") {
  for (auto k : {OperatorKind::Yano, OperatorKind::Rough, OperatorKind::Hodge1, OperatorKind::HodgeMinusTwoRicci,
                 OperatorKind::RicciAction})
    CHECK(operator_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(operator_kind_from_string("laplace"), InvalidArgumentError);
}

TEST_CASE("flat torus spectrum for 1-forms") {
  const auto M = DiscreteManifold::flat_torus({16, 16}, {1, 1});
  const auto op = assemble(OperatorKind::Yano, M, 1);
  const auto eig = lowest_eigenpairs(op, 18);
  const auto oracle = flat_oracle({1, 1}, op.band, 2, 18);
  REQUIRE(eig.count() == 18);
  for (int i = 0; i < 18; ++i) CHECK(eig.eigenvalues[i] == doctest::Approx(oracle[i]).epsilon(1e-9).scale(1.0));
  CHECK(eig.residuals.maxCoeff() < 1e-10 * eig.spectral_scale);
  CHECK(eig.kernel_dimension() == 2);
}

TEST_CASE("flat kernels are the constant tensors") {
  const auto M = DiscreteManifold::flat_torus({12, 12}, {1, 1});
  CHECK(lowest_eigenpairs(assemble(OperatorKind::Yano, M, 2), 8).kernel_dimension() == 3);
  const auto op3 = assemble(OperatorKind::Yano, M, 3);
  const auto eig3 = lowest_eigenpairs(op3, 8);
  CHECK(eig3.kernel_dimension() == 4);
  SymTensorPointd c(sym_index_table(2, 3));
  c.values << 0.3, -1.0, 2.0, 0.5;
  CHECK(kernel_projection_ratio(op3, eig3, constant_field(M.grid_ptr(), c)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("rectangular flat torus") {
  const auto M = DiscreteManifold::flat_torus({16, 16}, {1, 2});
  const auto eig = lowest_eigenpairs(assemble(OperatorKind::Rough, M, 1), 6);
  const auto oracle = flat_oracle({1, 2}, assemble(OperatorKind::Rough, M, 1).band, 2, 6);
  CHECK(eig.eigenvalues[2] == doctest::Approx(kPi * kPi).epsilon(1e-10));
  for (int i = 0; i < 6; ++i) CHECK(eig.eigenvalues[i] == doctest::Approx(oracle[i]).epsilon(1e-9).scale(1.0));
}

TEST_CASE("assembly consistency") {
  const auto F = DiscreteManifold::flat_torus({12, 12}, {1, 1});
  AssemblyOptions opt;
  opt.nodal_matrix = true;
  const auto yano = assemble(OperatorKind::Yano, F, 2, opt);
  const auto rough = assemble(OperatorKind::Rough, F, 2, opt);
  CHECK(assembly_probe_residual(yano, 4, 1) < 1e-12);
  CHECK((yano.stiffness - rough.stiffness).cwiseAbs().maxCoeff() < 1e-9 * rough.stiffness.cwiseAbs().maxCoeff());
  CHECK(yano.nodal.has_value());
  CHECK(yano.nodal->rows() == yano.nodal_dofs);

  const auto M = DiscreteManifold::conformal_torus({12, 12}, {1, 1}, 0.2, {1, 1});
  const auto op = assemble(OperatorKind::Yano, M, 2, opt);
  CHECK(assembly_probe_residual(op, 4, 2) < 1e-12);
  CHECK(op.stiffness_asymmetry < 1e-2);
  const auto fine = DiscreteManifold::conformal_torus({32, 32}, {1, 1}, 0.2, {1, 1});
  CHECK(assemble(OperatorKind::Yano, fine, 2).stiffness_asymmetry < 1e-12);
  CHECK((op.reduced_mass - op.reduced_mass.transpose()).norm() == 0.0);

  // flat mass: diagonal, (1/p!) times the fiber multiplicity of each entry
  const Eigen::MatrixXd& Mr = yano.reduced_mass;
  CHECK((Mr - Eigen::MatrixXd(Mr.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-13);
  for (int c = 0; c < yano.reduced_dofs(); ++c)
    CHECK(Mr(c, c) == doctest::Approx(0.5 * yano.table->multiplicity(c % 3)).epsilon(1e-13));
}

TEST_CASE("DOF cap") {
  const auto M = DiscreteManifold::flat_torus({16, 16}, {1, 1});
  AssemblyOptions opt;
  opt.dof_cap = 100;
  CHECK_THROWS_AS(assemble(OperatorKind::Yano, M, 2, opt), DofCapError);
}

TEST_CASE("conformal torus: symmetric 2-tensors") {
  const auto M = DiscreteManifold::conformal_torus({16, 16}, {1, 1}, 0.2, {1, 1});
  const auto op = assemble(OperatorKind::Yano, M, 2);
  const auto eig = lowest_eigenpairs(op, 10);
  CHECK(eig.kernel_dimension() == 1);
  CHECK(kernel_projection_ratio(op, eig, M.metric_tensor()) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(max_imaginary_part(op) < 1e-10 * eig.spectral_scale);
  CHECK(eig.residuals.maxCoeff() < 1e-10 * eig.spectral_scale);

  const auto orth = eigenspace_orthogonality_check(op, eig);
  CHECK(orth.pass);

  // samples: random fields and an element of the image
  std::vector<SymTensorField> samples{sample(M, 2, 1), sample(M, 2, 2)};
  samples.push_back(apply_operator(OperatorKind::Yano, sample(M, 2, 3), M));
  const auto dec = decomposition_check(op, eig, samples);
  CHECK(dec.pass);
  CHECK(kernel_projection_ratio(op, eig, samples.back()) < 1e-8);
}

TEST_CASE("conformal torus: 1-forms") {
  const auto M = DiscreteManifold::conformal_torus({16, 16}, {1, 1}, 0.2, {1, 0});
  const auto yano = lowest_eigenpairs(assemble(OperatorKind::Yano, M, 1), 8);
  const auto hodge = lowest_eigenpairs(assemble(OperatorKind::HodgeMinusTwoRicci, M, 1), 8);
  CHECK(eigenvalue_mismatch(yano.eigenvalues, hodge.eigenvalues, 1e-3 * yano.spectral_scale) < 1e-8);
  // harmonic 1-forms on T^2
  const auto h = lowest_eigenpairs(assemble(OperatorKind::Hodge1, M, 1), 4);
  CHECK(h.kernel_dimension() == 2);
  CHECK_THROWS_AS(assemble(OperatorKind::Hodge1, M, 2), DegreeMismatchError);
}

TEST_CASE("eigenvalue mismatch") {
  Eigen::VectorXd a(3), b(3);
  a << 0.0, 1.0, 2.0;
  b << 1e-9, 1.0, 2.2;
  CHECK(eigenvalue_mismatch(a, b, 1.0) == doctest::Approx(0.2 / 2.2));
  CHECK(eigenvalue_mismatch(a, a, 1.0) == 0.0);
}

TEST_CASE("iterative solver agrees with the dense solver") {
  const auto M = DiscreteManifold::conformal_torus({16, 16}, {1, 1}, 0.2, {1, 1});
  const auto op = assemble(OperatorKind::Yano, M, 2);
  const auto dense = lowest_eigenpairs(op, 8);
  const auto iter = lowest_eigenpairs(op, 8, 0);
  CHECK(dense.dense);
  CHECK_FALSE(iter.dense);
  CHECK(eigenvalue_mismatch(dense.eigenvalues, iter.eigenvalues, 1e-3 * dense.spectral_scale) < 1e-9);
  CHECK(iter.kernel_dimension() == dense.kernel_dimension());
  const double op_scale = op.stiffness.diagonal().cwiseAbs().maxCoeff() / op.reduced_mass.diagonal().minCoeff();
  CHECK(iter.residuals.maxCoeff() < 1e-9 * op_scale);
}
