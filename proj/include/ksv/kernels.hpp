#pragma once

#include <vector>

#include "ksv/cstar.hpp"

namespace ksv {

enum class Exec { Serial, Parallel };

/// Dense assembly kernels shared by the constructions. Each has a serial
/// reference and an OpenMP version; results agree to rounding.
namespace kernels {

/// Pairing matrices of the pre-module A ⊗ E (index p·d_E + q):
/// block (p, p') of entry β is P^E_β · φ(u_p* u_p').
std::vector<CMatrix> ksgns_pairing(const AlgebraShape& a, const std::vector<CMatrix>& module_pairing,
                                   const std::vector<CMatrix>& images, Exec exec = Exec::Parallel);

/// Pairing matrices of the pre-module E ⊗ F (index i·d_F + j):
/// entry γ is Σ_β P^E_β ⊗ (P^F_γ π(u_β)).
std::vector<CMatrix> tensor_pairing(const std::vector<CMatrix>& e_pairing, const std::vector<CMatrix>& f_pairing,
                                    const std::vector<CMatrix>& rep, Exec exec = Exec::Parallel);

/// Σ_{k,l} E_kl ⊗ X_{kl} for an n×n grid of d×d blocks given row-major.
CMatrix choi_matrix(const std::vector<CMatrix>& blocks, int n, Exec exec = Exec::Parallel);

}  // namespace kernels

}  // namespace ksv
