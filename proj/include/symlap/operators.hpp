#pragma once

#include "symlap/fields.hpp"
#include "symlap/geometry.hpp"
#include "symlap/manifold.hpp"

namespace symlap {

// Differential operators on symmetric tensor fields over a DiscreteManifold.
//
// Conventions (all indices covariant unless raised with g^{-1}):
//   (nabla phi)_{i; J}  = d_i phi_J - sum_k Gamma^m_{i J_k} phi_{J, k -> m}
//   (delta xi)_J        = -g^{ij} nabla_j xi_{i; J}
//   (delta* phi)_{I}    = sum over the p+1 slots k of (nabla phi)_{I_k; I minus slot k}
//   Delta_sym           = delta delta* - delta* delta
// Global products carry the weight 1/p! for fields of (symmetric) degree p.

MixedTensorField covariant_derivative(const SymTensorField& phi, const DiscreteManifold& M);

/// Divergence of a mixed field: contracts the free first slot with -g^{ij} nabla_j.
SymTensorField divergence(const MixedTensorField& xi, const DiscreteManifold& M);

/// Divergence of a symmetric field (degree drops by one). Degree 0 is rejected.
SymTensorField divergence(const SymTensorField& psi, const DiscreteManifold& M);

/// Unnormalized symmetrized covariant derivative; for p = 0 the gradient.
SymTensorField sym_derivative(const SymTensorField& phi, const DiscreteManifold& M);

SymTensorField rough_laplacian(const SymTensorField& phi, const DiscreteManifold& M);

/// Curvature endomorphism: p Ricci terms minus p(p-1) Riemann terms.
SymTensorField weitzenbock_B(const SymTensorField& phi, const DiscreteManifold& M);

/// Computed by composition, never through the curvature endomorphism.
SymTensorField yano_laplacian(const SymTensorField& phi, const DiscreteManifold& M);

/// nabla* nabla + B_p.
SymTensorField lichnerowicz_laplacian(const SymTensorField& phi, const DiscreteManifold& M);

/// sum_k r_{i_k}^s phi_{.. s ..}; for p = 1 this is r_i^j phi_j.
SymTensorField ricci_action(const SymTensorField& phi, const DiscreteManifold& M);

/// Hodge Laplacian of a 1-form in its Weitzenbock form nabla* nabla + Ric.
SymTensorField hodge_laplacian_1forms(const SymTensorField& phi, const DiscreteManifold& M);

/// Views a symmetric field of degree q >= 1 as a mixed field (first slot split off).
MixedTensorField split_first_slot(const SymTensorField& psi);

double global_product(const SymTensorField& phi, const SymTensorField& psi, const DiscreteManifold& M);
double global_product(const MixedTensorField& xi, const MixedTensorField& eta, const DiscreteManifold& M);
double global_norm(const SymTensorField& phi, const DiscreteManifold& M);

// Pointwise kernels

/// B_p(phi) at a point with the given curvature.
SymTensorPointd weitzenbock_B_point(const SymTensorPointd& phi, const PointCurvature& pc);

/// (1/(p-1)!) (r_ij phi^{i I} phi^j_I - (p-1) R_ijkl phi^{ik I'} phi^{jl}_{I'}), the single-term
/// form of the curvature density; equals (1/p!) g(B_p phi, phi).
double curvature_term_collapsed(const SymTensorPointd& phi, const PointCurvature& pc);

double factorial(int k);

/// The named global products entering the integral identities, each with its weight.
struct GlobalProductLedger {
  int degree = 0;
  double grad_grad = 0;       // <nabla phi, nabla phi>, weight 1/p!
  double div_div = 0;         // <delta phi, delta phi>, weight 1/(p-1)!
  double symd_symd = 0;       // <delta* phi, delta* phi>, weight 1/(p+1)!
  double curvature = 0;       // <B_p phi, phi> with full sums, weight 1/p!
  double curvature_collapsed = 0;  // single-term form, weight 1/(p-1)!
  double phi_phi = 0;         // <phi, phi>, weight 1/p!
  double w_grad = 0, w_div = 0, w_symd = 0, w_curv = 0, w_curv_collapsed = 0, w_phi = 0;
};

GlobalProductLedger product_ledger(const SymTensorField& phi, const DiscreteManifold& M);

}  // namespace symlap
