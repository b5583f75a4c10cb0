#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symlap/manifold.hpp"
#include "symlap/operators.hpp"
#include "symlap/report.hpp"

namespace symlap {

enum class OperatorKind { Yano, Rough, Hodge1, HodgeMinusTwoRicci, RicciAction };

std::string to_string(OperatorKind kind);
OperatorKind operator_kind_from_string(const std::string& name);

SymTensorField apply_operator(OperatorKind kind, const SymTensorField& phi, const DiscreteManifold& M);

inline constexpr std::int64_t kDefaultDofCap = 40000;
inline constexpr int kDenseSolverLimit = 3000;

struct AssemblyOptions {
  /// Largest |k_a| of the trigonometric trial space; 0 picks N/3 on the coarsest axis.
  int band = 0;
  std::int64_t dof_cap = kDefaultDofCap;
  /// Also build the nodal matrix A column by column (nodal DOF must stay below the dense limit).
  bool nodal_matrix = false;
};

/// An operator on symmetric p-tensor fields realized on the band-limited trial space
/// V = span{trig mode x fiber entry}: stiffness K = V^T M A V (symmetrized) and mass
/// Mr = V^T M V, where M is the node-block mass matrix of the global product.
/// Nodal DOF index: node * entries + e.
struct DiscreteOperator {
  OperatorKind kind = OperatorKind::Yano;
  const DiscreteManifold* manifold = nullptr;
  SymIndexTablePtr table;
  int band = 0;
  std::int64_t nodal_dofs = 0;

  std::vector<Eigen::MatrixXd> mass_blocks;  // per node, entries x entries
  Eigen::MatrixXd basis;                      // nodal_dofs x r
  Eigen::MatrixXd stiffness;                  // r x r, symmetric
  Eigen::MatrixXd stiffness_raw;              // r x r, V^T M A V as assembled
  Eigen::MatrixXd reduced_mass;               // r x r, symmetric positive definite
  double stiffness_asymmetry = 0;             // ||K - K^T|| / ||K|| before symmetrization
  std::optional<Eigen::MatrixXd> nodal;       // A, when requested
  Eigen::LLT<Eigen::MatrixXd> mass_factor;

  int degree() const { return table->degree(); }
  int reduced_dofs() const { return static_cast<int>(basis.cols()); }

  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd apply_mass(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double product(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) const;
  SymTensorField field(const Eigen::Ref<const Eigen::VectorXd>& coefficients) const;
  /// Coefficients of the M-orthogonal projection of a nodal vector onto the trial space.
  Eigen::VectorXd project(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

DiscreteOperator assemble(OperatorKind kind, const DiscreteManifold& M, int p, const AssemblyOptions& opt = {});

/// max |(A x)_i - flatten(op(x))_i| / max|flatten(op(x))| over random probes (requires the nodal matrix).
double assembly_probe_residual(const DiscreteOperator& op, int probes, std::uint64_t seed);

/// Largest imaginary part of the eigenvalues of the unsymmetrized pencil (V^T M A V, Mr).
double max_imaginary_part(const DiscreteOperator& op);

struct EigenResult {
  Eigen::VectorXd eigenvalues;      // ascending by value
  std::vector<int> magnitude_order; // indices into eigenvalues, ascending by |lambda|
  Eigen::VectorXd residuals;        // ||K c - lambda Mr c|| / ||c||, c Mr-normalized
  Eigen::MatrixXd coefficients;     // columns c_i, Mr-orthonormal
  std::vector<SymTensorField> fields;
  double spectral_scale = 0;        // largest computed |lambda|
  double max_imaginary = 0;
  bool dense = true;

  int count() const { return static_cast<int>(eigenvalues.size()); }
  /// 1e-7 times the spectral scale.
  double kernel_threshold() const;
  /// Count of |lambda| < threshold; throws AmbiguousKernelError without a 10x gap above it.
  int kernel_dimension(double threshold = -1) const;
};

/// Dense generalized eigensolve up to `dense_limit` reduced DOF, shift-invert subspace iteration above.
EigenResult lowest_eigenpairs(const DiscreteOperator& op, int k, int dense_limit = kDenseSolverLimit);

/// Max |<phi_i, phi_j>| over pairs whose eigenvalues differ by more than 1e-6 (relative).
ResidualReport eigenspace_orthogonality_check(const DiscreteOperator& op, const EigenResult& result);

/// Splits each sample into kernel projection plus remainder and checks their orthogonality.
ResidualReport decomposition_check(const DiscreteOperator& op, const EigenResult& result,
                                   const std::vector<SymTensorField>& samples);

/// Norm of the kernel projection of phi relative to ||phi||.
double kernel_projection_ratio(const DiscreteOperator& op, const EigenResult& result, const SymTensorField& phi);

/// Pairs eigenvalues in order: max |a_i - b_i| / max(|a_i|, |b_i|, floor).
double eigenvalue_mismatch(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double floor);

}  // namespace symlap
