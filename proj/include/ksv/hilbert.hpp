#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ksv/cstar.hpp"

namespace ksv {

/// Right B-module on C^d with a possibly degenerate B-valued pairing.
///
/// The action is stored per matrix unit of B, x·u_β = action[β]·x, so
/// action(b₁b₂) = action(b₂)·action(b₁). The pairing is stored as coefficient
/// matrices: ⟨x, y⟩ = Σ_β (x† pairing[β] y) u_β, conjugate-linear in x.
struct PreModule {
  AlgebraShape algebra;
  int dim = 0;
  std::vector<CMatrix> action;
  std::vector<CMatrix> pairing;

  /// Scalarized Gram matrix G_ij = τ(⟨e_i, e_j⟩).
  CMatrix gram() const;
  CMatrix action_of(const AlgebraElement& b) const;
  AlgebraElement inner(const CVector& x, const CVector& y) const;
};

struct PreModuleReport {
  double pairing_hermiticity = 0;  // ⟨e_i,e_j⟩* vs ⟨e_j,e_i⟩
  double right_linearity = 0;      // ⟨x, y·b⟩ vs ⟨x,y⟩b
  double action_law = 0;           // R(b₁b₂) vs R(b₂)R(b₁), R(1) = I
  double gram_min_eigenvalue = 0;
  bool pass = false;
};
PreModuleReport check_premodule(const PreModule& pre, const Tolerance& tol = {});

/// Hilbert B-module: a PreModule whose scalarized Gram matrix is positive
/// definite. Shared, immutable; each instance carries a unique id.
class HilbertModule {
 public:
  HilbertModule() = default;

  /// Throws SingularGram unless the Gram matrix is positive definite at rtol.
  static HilbertModule from_pre(PreModule pre, const Tolerance& tol = {});

  std::uint64_t id() const { return impl_->id; }
  const PreModule& data() const { return impl_->pre; }
  const AlgebraShape& algebra() const { return impl_->pre.algebra; }
  int dim() const { return impl_->pre.dim; }
  const CMatrix& action(int beta) const { return impl_->pre.action[beta]; }
  const CMatrix& pairing(int beta) const { return impl_->pre.pairing[beta]; }

  const CMatrix& gram() const { return impl_->gram; }
  const CMatrix& gram_inv() const { return impl_->gram_inv; }
  const CMatrix& gram_sqrt() const { return impl_->gram_sqrt; }
  const CMatrix& gram_inv_sqrt() const { return impl_->gram_inv_sqrt; }

  CMatrix action_of(const AlgebraElement& b) const { return impl_->pre.action_of(b); }
  AlgebraElement inner(const CVector& x, const CVector& y) const { return impl_->pre.inner(x, y); }
  /// ||x|| = sqrt(||⟨x,x⟩||_B)
  double norm(const CVector& x) const;

  bool same(const HilbertModule& o) const { return impl_ == o.impl_; }
  explicit operator bool() const { return static_cast<bool>(impl_); }

 private:
  struct Impl {
    std::uint64_t id;
    PreModule pre;
    CMatrix gram, gram_inv, gram_sqrt, gram_inv_sqrt;
  };
  std::shared_ptr<const Impl> impl_;
};

/// ⊕_i M_{m_i × n_i}(C) with ⟨x, y⟩_i = x_i* H_i y_i; coordinates (i, r, c)
/// row-major. metrics may be empty (identity metric).
HilbertModule rect_module(const AlgebraShape& b, const std::vector<int>& multiplicities,
                          const std::vector<CMatrix>& metrics = {});
/// B as a Hilbert module over itself.
HilbertModule algebra_module(const AlgebraShape& b);
/// B^n with ⟨x,y⟩ = Σ x_k* y_k; coordinates (copy, B-coordinates).
HilbertModule standard_module(const AlgebraShape& b, int copies);
HilbertModule direct_sum(const HilbertModule& e1, const HilbertModule& e2);
/// Same action, pairing pulled back along an invertible B-linear coordinate change c.
HilbertModule pullback_metric(const HilbertModule& e, const CMatrix& c);
HilbertModule zero_module(const AlgebraShape& b);

/// Adjointable (B-linear) map between Hilbert modules over the same algebra.
struct ModuleMap {
  HilbertModule source;
  HilbertModule target;
  CMatrix matrix;  // target.dim × source.dim

  CVector operator()(const CVector& x) const { return matrix * x; }
};

ModuleMap identity_map(const HilbertModule& e);
ModuleMap zero_map(const HilbertModule& src, const HilbertModule& tgt);
/// after ∘ before
ModuleMap compose(const ModuleMap& after, const ModuleMap& before);
ModuleMap operator+(const ModuleMap& a, const ModuleMap& b);
ModuleMap operator-(const ModuleMap& a, const ModuleMap& b);
ModuleMap operator*(cplx s, const ModuleMap& a);

/// Hilbert-space realization G_t^{1/2} X G_s^{-1/2} under the inner product τ⟨·,·⟩.
CMatrix realize(const CMatrix& x, const HilbertModule& src, const HilbertModule& tgt);
double realized_norm(const CMatrix& x, const HilbertModule& src, const HilbertModule& tgt);

/// max_β ||X R_src(β) − R_tgt(β) X|| (realized).
double linearity_residual(const ModuleMap& m);

/// η* = G_src⁻¹ η† G_tgt, verified against the B-valued adjoint identity.
ModuleMap adjoint_map(const ModuleMap& eta, const Tolerance& tol = {});
/// max over basis pairs ||⟨η e_i, e_j⟩ − ⟨e_i, η* e_j⟩||
double adjoint_identity_residual(const ModuleMap& eta, const ModuleMap& eta_star);

double module_operator_norm(const ModuleMap& eta);
/// max(||η*η − I||, ||ηη* − I||)
double unitarity_residual(const ModuleMap& eta);

/// θ_{x,y}(z) = x⟨y, z⟩
ModuleMap rank_one_operator(const HilbertModule& e, const CVector& x, const CVector& y);

/// Random element of L(E): average of a random matrix over the commutant projection.
CMatrix random_adjointable(const HilbertModule& e, std::uint64_t seed);
/// exp(i h) for a random self-adjoint h ∈ L(E).
CMatrix random_module_unitary(const HilbertModule& e, std::uint64_t seed);
/// Projection of an arbitrary matrix onto the commutant of the action (up to scaling per block).
CMatrix commutant_average(const HilbertModule& e, const CMatrix& x);

/// α-linear map: T(x·b) = T(x)·α(b).
struct AlphaLinearMap {
  HilbertModule source;
  HilbertModule target;
  Automorphism twist;
  CMatrix matrix;
};
double alpha_linearity_residual(const AlphaLinearMap& t);
/// max over basis pairs ||⟨T e_i, y_j⟩ − α(⟨e_i, T* y_j⟩)|| with T* given.
double alpha_adjoint_residual(const AlphaLinearMap& t, const AlphaLinearMap& t_star);

/// Complex-linear map between modules over possibly different algebras.
struct LinearMap {
  HilbertModule source;
  HilbertModule target;
  CMatrix matrix;
};

struct Quotient {
  HilbertModule module;
  CMatrix q;       // dim × pre.dim, coordinates of classes
  CMatrix s;       // pre.dim × dim, section
  CMatrix kernel;  // pre.dim × (pre.dim − dim), basis of the null space
};

/// Quotient of a PreModule by {z : ⟨z,z⟩ = 0}, detected as ker G.
Quotient quotient_by_null(const PreModule& pre, const Tolerance& tol = {});

}  // namespace ksv
