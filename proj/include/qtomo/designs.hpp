#pragma once

#include "qtomo/linops.hpp"

namespace qtomo {

// Weyl (generalized Pauli) unitaries W_{a,b} = X^a Z^b on C^d, with
// X|j> = |j+1 mod d> and Z|j> = w^j |j>, w = exp(2 pi i / d).  The list is
// ordered with index a*d + b.
std::vector<Matrix> weyl_operators(int d);

// Single-qudit Clifford group modulo global phase, generated by closure.
// d = 2 gives 24 elements, d = 3 gives 216.
std::vector<Matrix> clifford_group(int d);

// Frame potential (1/|G|^2) sum_{g,h} |Tr[g^dag h]|^4; equals 2 exactly for
// a unitary 2-design.
double frame_potential_2(const std::vector<Matrix>& group);

bool is_unitary_2design(const std::vector<Matrix>& group, double tol = 1e-9);

}  // namespace qtomo
