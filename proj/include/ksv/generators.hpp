#pragma once

#include <cstdint>
#include <vector>

#include "ksv/equivariant.hpp"
#include "ksv/random.hpp"

namespace ksv {

struct SizeCaps {
  int max_block = 3;
  int max_blocks = 2;
  int max_module_dim = 6;
  int max_group_order = 6;
  int instances_per_suite = 10;
};

/// Throws InvalidConfig for non-positive caps or when d_A·d_E can exceed 200.
void validate_caps(const SizeCaps& caps);

/// One of [1], [2], [3], [2,2], [1,2] that fits the caps.
AlgebraShape random_shape(Rng& rng, const SizeCaps& caps);
/// Rect module with random multiplicities (0..2 per block) and metrics, 1 ≤ dim ≤ max_dim.
HilbertModule random_module(const AlgebraShape& b, Rng& rng, int max_dim);
/// Injective unital block embedding into a random codomain with blocks ≤ max_block.
StarMap random_star_map(const AlgebraShape& domain, Rng& rng, const SizeCaps& caps);

/// φ ⊕ ψ on E ⊕ F.
CPMap direct_sum_cp(const CPMap& phi, const CPMap& psi);

/// Random element of the intertwiner space with realized norm in [0.5, 1.5].
CMatrix random_intertwiner(const CPMap& phi1, const CPMap& phi2, const Automorphism& alpha, Rng& rng,
                           const Tolerance& tol = {});

/// φ_0 → φ_1 → ... with φ_{k+1} = Wφ_k(α⁻¹·)W* ⊕ ψ (ψ on a module of dim ≤ extra_dim,
/// possibly absent) and η_k a random intertwiner.
struct MorphismChain {
  std::vector<CPMap> phis;
  std::vector<Intertwiner> arrows;  // arrows[k]: phis[k] → phis[k+1]
};
MorphismChain random_chain(const CPMap& start, int length, int extra_dim, Rng& rng, const Tolerance& tol = {});

/// Three objects over different coefficient algebras, a chain X0 → X1 → X2, a
/// second X0 → X1 arrow and a scaled identity on each object.
Diagram random_diagram(const AlgebraShape& a, Rng& rng, const SizeCaps& caps, const Tolerance& tol = {});

/// The groups with order ≤ max_order among Z2, Z3, Z4, S3; the trivial group if none fits.
std::vector<FiniteGroup> test_groups(int max_order);

}  // namespace ksv
