#pragma once

#include "qtomo/processing.hpp"

namespace qtomo {

// Choi operator of a map C: L(H_in) -> L(H_out), stored on H_out x H_in:
//   R = (C x id)(|I>><<I|),  C(rho) = Tr_in[(I x rho^T) R].
struct ChoiOperator {
    Matrix r;
    int d_out = 0;
    int d_in = 0;
};

struct ChannelCheck {
    bool completely_positive = false;
    bool trace_preserving = false;
    bool unital = false;
    double cp_min_eigenvalue = 0.0;
    double tp_residual = 0.0;      // ||Tr_out R - I_in||_max
    double unital_residual = 0.0;  // ||Tr_in R - I_out||_max
};

ChoiOperator choi_from_kraus(const std::vector<Matrix>& kraus);
ChoiOperator identity_channel(int d);
ChoiOperator unitary_channel(const Matrix& u);
ChoiOperator depolarizing_channel(double p, int d);

Matrix apply_channel(const ChoiOperator& c, const Matrix& rho);

// Composition second(first(.)) through the link product.
ChoiOperator compose(const ChoiOperator& second, const ChoiOperator& first);

ChannelCheck validate_channel(const ChoiOperator& c, double tol = kHermTol);

Json choi_to_json(const ChoiOperator& c);
ChoiOperator choi_from_json(const Json& j);

// ------------------------------ faithful states ----------------------------

// Bipartite resource state T on H_probe x H_ref.  The probe side is handed
// to the unknown device; T is faithful when the induced map
//   T(P) = Tr_probe[(P x I) T]
// is injective, so probe operators can be recovered from ref-side data.
struct FaithfulState {
    Matrix t;
    int d_probe = 0;
    int d_ref = 0;
};

struct FaithfulCheck {
    bool faithful = false;
    double min_singular_value = 0.0;
    double condition_number = 0.0;
};

// (d_ref^2) x (d_probe^2) matrix of the induced map, column k = vec(T(E_k)).
Matrix faithful_map_matrix(const FaithfulState& t);

FaithfulCheck is_faithful(const FaithfulState& t, double tol_rel = 1e-9);

// T = |I>><<I| / d, the maximally entangled faithful state.
FaithfulState max_entangled_faithful(int d);

// ------------------------------ device tomography --------------------------

// Output state (C x id)(T) of feeding the probe side of T through a channel.
Matrix channel_output_state(const ChoiOperator& c, const FaithfulState& t);

// Exact joint distribution p(i, m) = Tr[(P_i x Q_m) T]; rows index the
// unknown POVM, columns the reference POVM.
Eigen::MatrixXd joint_probabilities(const Povm& unknown,
                                    const Povm& reference,
                                    const FaithfulState& t);

// Reconstruct a Choi operator from frequencies of an IC POVM measured on
// (C x id)(T).  `frequencies` follows the POVM outcome order.
ChoiOperator process_tomography(const Povm& ic_povm, const FaithfulState& t,
                                int d_out, const RealVector& frequencies,
                                double tol_rel = 1e-9);

// Reconstruct the unknown POVM from joint frequencies nu(i, m) via
// conditional-state tomography on the ref side and inversion of T.
Povm povm_tomography(const Povm& reference, const FaithfulState& t,
                     const Eigen::MatrixXd& joint_frequencies,
                     double tol_rel = 1e-9);

}  // namespace qtomo
