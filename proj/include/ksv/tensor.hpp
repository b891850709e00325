#pragma once

#include "ksv/cp.hpp"
#include "ksv/kernels.hpp"

namespace ksv {

/// E ⊗_π F: quotient of the pre-module E ⊗ F (index i·d_F + j) with C acting
/// on the F slot and ⟨x⊗f, x'⊗f'⟩ = ⟨f, π(⟨x,x'⟩)f'⟩.
struct TensorModule {
  HilbertModule left;   // E over B
  CPMap rep;            // π: B → L(F), F over C
  HilbertModule result;
  CMatrix q, s, kernel;
  StarMap along;  // ρ when built by tensor_along, empty otherwise

  const HilbertModule& right() const { return rep.module; }
  int pre_dim() const { return left.dim() * right().dim(); }
  /// Class of the elementary tensor x ⊗ f.
  CVector embed(const CVector& x, const CVector& f) const;
};

TensorModule interior_tensor(const HilbertModule& e, const CPMap& pi, const Tolerance& tol = {},
                             Exec exec = Exec::Parallel);
/// E ⊗_ρ C with C over itself and π(b) = left multiplication by ρ(b).
TensorModule tensor_along(const HilbertModule& e, const StarMap& rho, const Tolerance& tol = {});
/// C over itself with b ↦ left multiplication by ρ(b).
CPMap left_regular(const StarMap& rho);

/// max over basis b of ||[x·b ⊗ f] − [x ⊗ π(b)f]|| on all basis tensors.
double balance_residual(const TensorModule& tm);

/// q_to (T ⊗ I) s_from; throws WellDefinednessViolation if T ⊗ I leaks the null space.
ModuleMap tensor_extend(const ModuleMap& t, const TensorModule& from, const TensorModule& to,
                        const Tolerance& tol = {});
ModuleMap tensor_extend_operator(const ModuleMap& t, const TensorModule& tm, const Tolerance& tol = {});
/// a ↦ φ(a) ⊗ I on E ⊗_π F.
CPMap tensor_cp(const CPMap& phi, const TensorModule& tm, const Tolerance& tol = {});
/// (η̂, α) between (E₁⊗_πF, φ̃₁) and (E₂⊗_πF, φ̃₂).
Intertwiner tensor_lift(const Intertwiner& m, const TensorModule& t1, const TensorModule& t2,
                        const Tolerance& tol = {});

/// Largest violation of the two norm inequalities comparing
/// Σ⟨f_i, π(⟨ηx_i, ηx_j⟩)f_j⟩ with ||η||² Σ⟨f_i, π(⟨x_i, x_j⟩)f_j⟩ (and the η* mirror).
double tensor_family_excess(const ModuleMap& eta, const CPMap& pi, const std::vector<CVector>& xs,
                            const std::vector<CVector>& ys, const std::vector<CVector>& fs);

struct TwistedModule {
  TensorModule tensor;  // E ⊗_α B
  AlphaLinearMap u;     // x ⊗ a ↦ x α⁻¹(a), twist α⁻¹
};
TwistedModule twist_unitary(const HilbertModule& e, const Automorphism& alpha, const Tolerance& tol = {});
/// T ↦ T ∘ U for an α-linear T out of the twisted module's base.
ModuleMap alpha_transport(const AlphaLinearMap& t, const TwistedModule& tw);
/// S ↦ S ∘ U⁻¹, inverse of alpha_transport.
AlphaLinearMap alpha_untransport(const ModuleMap& s, const TwistedModule& tw);

struct Inclusion {
  TensorModule tensor;  // E ⊗_inc B
  ModuleMap iota;       // x ⊗ b ↦ x b
};
Inclusion inclusion_unitary(const HilbertModule& e, const Tolerance& tol = {});
/// ι for an existing E ⊗_id B.
ModuleMap inclusion_map(const TensorModule& tm);

struct CompositionTensor {
  TensorModule first;   // E ⊗_{ρ₁} C
  TensorModule second;  // (E ⊗_{ρ₁} C) ⊗_{ρ₂} D
  TensorModule direct;  // E ⊗_{ρ₂ρ₁} D
  ModuleMap u;          // (x ⊗ c) ⊗ d ↦ x ⊗ ρ₂(c)d
};
CompositionTensor composition_unitary(const HilbertModule& e, const StarMap& rho1, const StarMap& rho2,
                                      const Tolerance& tol = {});
/// Same, reusing an existing E ⊗_{ρ₁} C and optionally an existing E ⊗_{ρ₂ρ₁} D.
CompositionTensor composition_unitary(const TensorModule& first, const StarMap& rho2, const Tolerance& tol = {},
                                      const TensorModule* direct = nullptr);

/// x ↦ [x ⊗ 1_C] into E ⊗_ρ C.
LinearMap v_rho(const TensorModule& tm);
/// ||V(x·b) − V(x)·ρ(b)|| over basis x, b (realized in the target).
double v_rho_linearity_residual(const LinearMap& v, const StarMap& rho);

}  // namespace ksv
