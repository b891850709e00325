#pragma once

#include <vector>

#include "ksv/tensor.hpp"

namespace ksv {

/// (F_φ, π_φ, V_φ) with the quotient data of the pre-module A ⊗ E (index p·d_E + q).
struct KsgnsTriple {
  CPMap phi;
  HilbertModule module;  // F_φ
  CPMap rep;             // π_φ
  ModuleMap v;           // V_φ: E → F_φ
  CMatrix q, s, kernel;

  int pre_dim() const { return phi.algebra.dim() * phi.module.dim(); }
};

/// Throws NotCP unless φ passes the Choi test, SubmoduleViolation if left
/// multiplication fails to descend to the quotient.
KsgnsTriple ksgns(const CPMap& phi, const Tolerance& tol = {}, Exec exec = Exec::Parallel);

struct TripleReport {
  double reconstruction = 0;    // max_a ||V*π(a)V − φ(a)||
  double adjoint_formula = 0;   // V*[a ⊗ y] vs φ(a)y
  double multiplicativity = 0;  // π_φ
  double unitality = 0;
  int spanning_rank = 0;
  int dim = 0;
};
TripleReport check_triple(const KsgnsTriple& t, const Tolerance& tol = {});

/// Columns π(u_p)V e_q for all basis p, q.
CMatrix spanning_matrix(const CPMap& rep, const ModuleMap& v);
int numerical_rank(const CMatrix& m, const Tolerance& tol = {});

/// η̃ = q₂(α ⊗ η)s₁; throws WellDefinednessViolation if α ⊗ η leaks ker G₁.
Intertwiner ksgns_lift(const Intertwiner& m, const KsgnsTriple& t1, const KsgnsTriple& t2, const Tolerance& tol = {});

struct LiftReport {
  double embedding = 0;        // η̃V₁ − V₂η
  double adjoint_formula = 0;  // η̃*[a ⊗ y] vs [α⁻¹(a) ⊗ η*y]
  double norm_excess = 0;      // ||η̃|| − ||η||
};
LiftReport check_lift(const Intertwiner& m, const Intertwiner& lifted, const KsgnsTriple& t1, const KsgnsTriple& t2);

struct Idempotency {
  KsgnsTriple inner;  // KSGNS of (F_φ, π_φ)
  ModuleMap v;        // V_{π_φ}: F_φ → F_{π_φ}
};
Idempotency idempotency_unitary(const KsgnsTriple& t, const Tolerance& tol = {});
/// max_a ||V π_φ(a) − π_{π_φ}(a) V||
double idempotency_intertwining(const KsgnsTriple& t, const Idempotency& id);

struct ProbeSample {
  CVector x;  // in E₁
  AlgebraElement a;
};

struct ProbeReport {
  std::vector<double> input;   // Σ_samples d_{x,a}(m_k, m)
  std::vector<double> lifted;  // same for the lifts on V-pushed samples
  double constant = 0;         // bound C in lifted ≤ C·input
  double worst_ratio = 0;
  double monotonicity = 0;     // largest increase between consecutive lifted distances
  bool pass = false;
};
/// Decay of the lifted pseudo-metric along a convergent path m_k → m. The
/// lifted samples are V_φ x and π_φ(a)V_φ x. Throws NonConvergentInput if the
/// input distances do not end at most 10·ctol.
ProbeReport continuity_probe(const std::vector<Intertwiner>& path, const Intertwiner& limit, const KsgnsTriple& t1,
                             const KsgnsTriple& t2, const std::vector<ProbeSample>& samples,
                             const Tolerance& tol = {});

}  // namespace ksv
