#pragma once

#include "qtomo/linops.hpp"
#include "qtomo/serialize.hpp"

namespace qtomo {

// A POVM {P_l} on C^d doubles as an operator frame; informational
// completeness means the frame operator F = sum_l |P_l>><<P_l| is invertible
// on L(C^d).
struct Povm {
    std::vector<Matrix> elements;
    int dim = 0;

    int num_outcomes() const { return static_cast<int>(elements.size()); }
};

struct DualFrame {
    std::vector<Matrix> elements;
    int dim = 0;
};

using FrameOperator = Matrix;

struct PovmValidation {
    bool ok = false;
    double worst_negative_eigenvalue = 0.0;  // most negative element eigenvalue
    double hermiticity_residual = 0.0;
    double completeness_residual = 0.0;      // ||sum P_l - I||_max
};

struct FrameBounds {
    double lower = 0.0;  // a: smallest eigenvalue of F
    double upper = 0.0;  // b: largest eigenvalue of F
};

struct DualCheck {
    bool ok = false;
    double residual = 0.0;  // ||sum_l |P_l>><<Q_l| - I||_max
};

PovmValidation validate_povm(const Povm& povm, double tol = kHermTol);

FrameOperator frame_operator(const Povm& povm);
FrameBounds frame_bounds(const Povm& povm);

// F must be invertible; the relative eigenvalue threshold decides rank.
bool is_info_complete(const Povm& povm, double tol_rel = 1e-9);

// Canonical (minimal-norm) dual D_l = devec(F^{-1}|P_l>>).  Throws if the
// POVM is not informationally complete.
DualFrame canonical_dual(const Povm& povm, double tol_rel = 1e-9);

// Q_l = D_l + Y_l - sum_j Tr[D_l P_j] Y_j for hermitian perturbations Y_l;
// every choice satisfies the dual identity.
DualFrame alternate_dual(const Povm& povm, const std::vector<Matrix>& y,
                         double tol_rel = 1e-9);

DualCheck verify_dual(const Povm& povm, const DualFrame& dual,
                      double tol = kAlgebraTol);

// ------------------------------ constructions ------------------------------

// Six-outcome qubit POVM (1/3)|psi_{i,+-}><psi_{i,+-}| from the three Pauli
// eigenbases, ordered (x+, x-, y+, y-, z+, z-).
Povm pauli_povm();

// Covariant POVM w U_g seed U_g^dag with w = d / (|G| Tr[seed]); completeness
// holds exactly iff the unitary set is a 1-design (validated within tol).
Povm covariant_povm(const Matrix& seed, const std::vector<Matrix>& unitaries,
                    double tol = 1e-9);

// Random IC POVM: n PSD elements normalized by S^{-1/2} (.) S^{-1/2}.
Povm random_ic_povm(int d, int n_outcomes, Rng& rng);

// Product POVM {A_i x B_j} with outcome index i * |B| + j; the tensor product
// of IC POVMs is IC on the product space.
Povm povm_tensor(const Povm& a, const Povm& b);

Json povm_to_json(const Povm& povm);
Povm povm_from_json(const Json& j);
Json dual_to_json(const DualFrame& dual);
DualFrame dual_from_json(const Json& j);

}  // namespace qtomo
