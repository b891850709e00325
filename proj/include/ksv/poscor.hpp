#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "ksv/ksgns.hpp"

namespace ksv {

/// (E_B, φ) with a fixed A; objects compare by id only.
struct PosCorObject {
  std::uint64_t id = 0;
  CPMap phi;

  const HilbertModule& module() const { return phi.module; }
  const AlgebraShape& coefficients() const { return phi.module.algebra(); }
};
PosCorObject make_object(CPMap phi);

/// (ρ, (η, α)) with η: E_B ⊗_ρ C → E_C.
struct PosCorMorphism {
  std::uint64_t dom = 0, cod = 0;
  StarMap rho;
  TensorModule domain_tensor;
  ModuleMap eta;
  Automorphism alpha;
};

/// Builds the domain tensor E ⊗_ρ C; eta_pre is η∘q as a matrix on the pre-space E ⊗ C.
PosCorMorphism make_morphism(const PosCorObject& dom, const PosCorObject& cod, const StarMap& rho,
                             const CMatrix& eta_pre, const Automorphism& alpha, const Tolerance& tol = {});
/// Pre-space form η∘q of the η component.
CMatrix eta_pre(const PosCorMorphism& m);

struct PosCorMorphismReport {
  StarMapReport rho;
  MorphismReport intertwiner;
  bool pass = false;
};
PosCorMorphismReport check_poscor_morphism(const PosCorMorphism& m, const PosCorObject& dom, const PosCorObject& cod,
                                           const Tolerance& tol = {});

PosCorMorphism poscor_identity(const PosCorObject& obj, const Tolerance& tol = {});
/// (ρ₂ρ₁, (η₂ ∘ η̂₁ ∘ U⁻¹, α₂α₁)); throws ObjectMismatch unless cod(m1) = dom(m2).
PosCorMorphism poscor_compose(const PosCorMorphism& m2, const PosCorMorphism& m1, const Tolerance& tol = {});

/// ||G^{1/2}(η₁q₁ − η₂q₂)|| + ||ρ₁ − ρ₂|| + ||α₁ − α₂||; requires matching endpoints.
double morphism_distance(const PosCorMorphism& m1, const PosCorMorphism& m2);
/// ||ρ₁(b) − ρ₂(b)|| + ||η₁[x] − η₂[x]|| + ||α₁(a) − α₂(a)|| with x in the pre-space E ⊗ C.
double poscor_pseudometric(const PosCorMorphism& m1, const PosCorMorphism& m2, const AlgebraElement& b,
                           const CVector& x_pre, const AlgebraElement& a);

struct CommutingUnitary {
  TensorModule inner;  // E ⊗_π F
  KsgnsTriple left;    // A ⊗_{φ̃} (E ⊗_π F)
  TensorModule right;  // (A ⊗_φ E) ⊗_π F
  ModuleMap v;
};
/// V[a ⊗ (x ⊗ f)] = [(a ⊗ x) ⊗ f]; both sides are quotients of A ⊗ E ⊗ F.
CommutingUnitary commuting_unitary(const KsgnsTriple& t, const CPMap& pi, const Tolerance& tol = {});
/// Same with the inner tensor, its KSGNS triple and the outer tensor supplied.
ModuleMap commuting_map(const KsgnsTriple& t, const TensorModule& inner, const KsgnsTriple& left,
                        const TensorModule& right);

/// KSGNS on PosCor(A). Dilated objects get fresh ids and are cached per source object.
class KsgnsFunctor {
 public:
  explicit KsgnsFunctor(Tolerance tol = {}) : tol_(tol) {}

  /// Use an existing triple for obj instead of building one.
  void adopt(const PosCorObject& obj, KsgnsTriple t);
  const KsgnsTriple& triple(const PosCorObject& obj);
  const PosCorObject& object(const PosCorObject& obj);
  /// (ρ, (η̃ ∘ V⁻¹, α)) between the dilated objects.
  PosCorMorphism morphism(const PosCorMorphism& m, const PosCorObject& dom, const PosCorObject& cod);
  /// (inc, (V_{π_φ} ∘ ι, 1_A)): KSGNS(obj) → KSGNS(KSGNS(obj)).
  PosCorMorphism idempotency(const PosCorObject& obj);

 private:
  struct Entry {
    KsgnsTriple triple;
    PosCorObject object;
  };
  const Entry& entry(const PosCorObject& obj);

  Tolerance tol_;
  std::mutex mu_;
  std::map<std::uint64_t, std::unique_ptr<Entry>> cache_;
};

struct Diagram {
  std::vector<PosCorObject> objects;
  struct Arrow {
    int dom, cod;
    PosCorMorphism m;
  };
  std::vector<Arrow> arrows;
};

struct LawReport {
  double left_identity = 0;
  double right_identity = 0;
  double associativity = 0;
  double invariants = 0;  // worst PosCorMorphism residual over arrows and composites
  int worst_arrow = -1;   // arrow with the largest invariant residual
  bool pass = false;
};
LawReport check_category_laws(const Diagram& d, const Tolerance& tol = {});

}  // namespace ksv
