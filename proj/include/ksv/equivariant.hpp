#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ksv/poscor.hpp"
#include "ksv/random.hpp"

namespace ksv {

/// Finite group given by its multiplication table.
struct FiniteGroup {
  std::string name;
  std::vector<std::vector<int>> table;  // table[g][h] = gh
  int identity = 0;
  std::vector<int> inverse;
  std::vector<int> parity;  // homomorphism to Z₂, all zero if none is used

  int order() const { return static_cast<int>(table.size()); }
  int mul(int g, int h) const { return table[g][h]; }

  static FiniteGroup trivial();
  static FiniteGroup cyclic(int n);
  static FiniteGroup symmetric3();
  /// Builds inverse and identity from a table; throws ValidationError if the
  /// table is not a group.
  static FiniteGroup from_table(std::string name, std::vector<std::vector<int>> table);

  /// Unitary irreducible representations (matrices per element) of the
  /// built-in families; other tables only get the trivial one.
  std::vector<std::vector<CMatrix>> irreps() const;
  /// Direct sum of random irreducibles of total dimension n, conjugated by a
  /// Haar unitary.
  std::vector<CMatrix> random_rep(int n, Rng& rng) const;
};

struct DynamicalSystem {
  AlgebraShape algebra;
  FiniteGroup group;
  std::vector<Automorphism> action;
  // Filled by random_action: block permutation and target-block unitaries per element.
  std::vector<std::vector<int>> block_perm;
  std::vector<std::vector<CMatrix>> block_unitaries;
};
/// max(||α_e − id||, max ||α_gα_h − α_{gh}||)
double action_residual(const DynamicalSystem& s);
/// g ↦ Ad(u_g) blockwise, composed with the swap of one pair of equal blocks on odd-parity elements.
DynamicalSystem random_action(const AlgebraShape& shape, const FiniteGroup& g, Rng& rng, bool allow_swap = true);

struct EquivariantCorrespondence {
  DynamicalSystem a_sys, b_sys;
  CPMap phi;
  std::vector<CMatrix> u;  // U_g on E
};

struct EquivariantReport {
  double homomorphism = 0;
  double twisted_linearity = 0;  // U_g R(b) − R(β_g(b)) U_g
  double pairing_twist = 0;      // ⟨U_g x, U_g y⟩ − β_g(⟨x, y⟩)
  double covariance = 0;         // U_g φ(a) − φ(α_g(a)) U_g
  int worst_element = -1;
  double threshold = 0;
  bool pass = false;
};
EquivariantReport check_equivariant(const EquivariantCorrespondence& c, const Tolerance& tol = {});
EquivariantReport check_equivariant(const FiniteGroup& g, const std::vector<Automorphism>& alpha,
                                    const std::vector<Automorphism>& beta, const CPMap& phi,
                                    const std::vector<CMatrix>& u, const Tolerance& tol = {});

/// (1/|G|) Σ_h U_h φ(α_h⁻¹(a)) U_h⁻¹
CPMap group_average(const CPMap& phi, const DynamicalSystem& a_sys, const std::vector<CMatrix>& u);

/// E a rect module over B with metrics invariant under a permutation
/// representation P; U_g = P(g) ⊗ β_g on each block; φ averaged from random_cp.
EquivariantCorrespondence random_equivariant(const AlgebraShape& a, const AlgebraShape& b, const FiniteGroup& g,
                                             std::uint64_t seed, int max_dim);

struct FunctorFamily {
  PosCorObject object;
  std::vector<PosCorMorphism> morphisms;  // (β_g, (U_g ∘ V_{β_g}⁻¹, α_g))
  double unitarity = 0;
  double composition = 0;   // F(g)∘F(h) vs F(gh)
  double identity = 0;      // F(e) vs identity
  double round_trip = 0;    // η_g ∘ V_{β_g} vs U_g
  double invariants = 0;
};
FunctorFamily correspondence_to_functor(const EquivariantCorrespondence& c, const Tolerance& tol = {});

struct DilationQuadruple {
  KsgnsTriple triple;
  std::vector<CMatrix> utilde;
};

/// Ũ_g[a ⊗ x] = [α_g(a) ⊗ U_g x]; throws WellDefinednessViolation if α_g ⊗ U_g leaks ker G.
DilationQuadruple dilate(const EquivariantCorrespondence& c, const Tolerance& tol = {});
DilationQuadruple dilate(const EquivariantCorrespondence& c, const KsgnsTriple& t, const Tolerance& tol = {});

struct DilationReport {
  EquivariantReport equivariance;  // ((F_φ, π_φ), Ũ)
  int spanning_rank = 0;
  int dim = 0;
  double reconstruction = 0;  // V*π(a)V − φ(a)
  double embedding = 0;       // V U_g − Ũ_g V
};
DilationReport check_dilation(const EquivariantCorrespondence& c, const DilationQuadruple& d, const Tolerance& tol = {});

/// Ũ_g through the functor picture: KSGNS(F(g)).η ∘ V'_{β_g}; max difference to the direct Ũ.
double categorical_dilation_residual(const EquivariantCorrespondence& c, const DilationQuadruple& d,
                                     const Tolerance& tol = {});

/// Second quadruple on the same module conjugated by z: π' = zπz*, V' = zV, Ũ' = zŨz*.
DilationQuadruple conjugate_quadruple(const DilationQuadruple& d, const CMatrix& z);

struct UniquenessReport {
  ModuleMap w;  // F' → F_φ
  double unitarity = 0;
  double representation = 0;  // Wπ'(a)W* − π_φ(a)
  double embedding = 0;       // WV' − V_φ
  double symmetry = 0;        // WŨ'_gW* − Ũ_g
};
/// W from W·[π'(a_p)V'e_q] = [π(a_p)V e_q]; throws SpanningFailure if a spanning set is deficient.
UniquenessReport uniqueness_unitary(const DilationQuadruple& d, const DilationQuadruple& other,
                                    const Tolerance& tol = {});

struct GnsDemo {
  int n = 0;        // A = M_n
  int order = 0;    // of the automorphism
  int dim = 0;      // of the GNS space
  double unitarity = 0;
  double covariance = 0;
  double nontriviality = 0;  // ||Ũ − I||
  double reconstruction = 0;
};
/// Diagonal faithful state on M_n invariant under Ad(diag of roots of unity), B = E = ℂ.
GnsDemo gns_demo(int n, std::uint64_t seed, const Tolerance& tol = {});

}  // namespace ksv
