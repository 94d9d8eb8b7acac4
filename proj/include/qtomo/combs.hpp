#pragma once

#include "qtomo/devices.hpp"

namespace qtomo {

// N-tooth quantum comb on wires 0..2N-1 in ascending order; even wires are
// tooth inputs, odd wires tooth outputs.  Causality is the recursive
// normalization Tr_{2k-1}[R^(k)] = R^(k-1) x I_{2k-2} with R^(0) = 1.
struct QuantumComb {
    Matrix r;
    std::vector<int> dims;  // 2N entries, wire 0 first
    int teeth = 0;
};

struct CombCheck {
    bool ok = false;
    double cp_min_eigenvalue = 0.0;
    double hermiticity_residual = 0.0;
    // per recursion level k = N, N-1, ..., 1: ||Tr_{2k-1} R^(k) - R^(k-1) x I||
    std::vector<double> normalization_residuals;
    double scalar_residual = 0.0;  // |R^(0) - 1|
};

CombCheck validate_comb(const QuantumComb& c, double tol = 1e-9);

// One-tooth comb of a channel: wires (0 = in, 1 = out).
QuantumComb comb_from_choi(const ChoiOperator& c);

// Link two combs along equal wire labels; the result must again have an even
// wire count (use link_product directly for irregular contractions).
QuantumComb comb_link(const QuantumComb& a, const std::vector<int>& labels_a,
                      const QuantumComb& b, const std::vector<int>& labels_b);

Json comb_to_json(const QuantumComb& c);
QuantumComb comb_from_json(const Json& j);

// ------------------------------ testers ------------------------------------

// Process tester {Pi_i} on H_out x H_in with sum_i Pi_i = I_out x sigma,
// Tr[sigma] = 1.  Born rule: p_i = Tr[Pi_i R_C].
struct Tester {
    std::vector<Matrix> elements;  // Choi factor order (out, in)
    int d_out = 0;
    int d_in = 0;
};

struct TesterCheck {
    bool ok = false;
    double psd_min_eigenvalue = 0.0;
    double normalization_residual = 0.0;  // ||sum Pi - I x sigma||_max
    double sigma_trace_error = 0.0;
    Matrix sigma;  // extracted normalization state on H_in
};

TesterCheck validate_tester(const Tester& t, double tol = 1e-9);

RealVector tester_probabilities(const Tester& t, const ChoiOperator& c,
                                double tol = 1e-9);

// Tester from a fixed input state and an output POVM: Pi_i = M_i x rho^T.
Tester tester_from_state_povm(const Matrix& rho, const Povm& povm);

// Physical realization: prepare |sqrt(sigma^T)>> on H_in x H_anc, send the
// first half through the channel, measure the POVM
//   P_i = (I x sigma^{-1/2}) Pi_i (I x sigma^{-1/2})
// on H_out x H_anc.  When sigma is rank deficient a null outcome padding the
// POVM to completeness is appended (it never fires).
struct TesterRealization {
    Vector input_state;  // on H_in x H_anc
    Povm povm;           // on H_out x H_anc
    bool padded = false;
};

TesterRealization realize_tester(const Tester& t, double tol_rel = 1e-10);

// Probabilities of the realization on a channel, for cross-checking.
RealVector realization_probabilities(const TesterRealization& r,
                                     const ChoiOperator& c, double tol = 1e-9);

// Duals of the tester elements as an operator frame on H_out x H_in.
// Reconstruction sum_i p_i Delta_i recovers the component of the Choi
// operator inside span{Pi_i}; exact when the tester is IC.
struct TesterDuals {
    std::vector<Matrix> elements;
    bool info_complete = false;
};

TesterDuals tester_dual_expand(const Tester& t, double tol_rel = 1e-9);

Json tester_to_json(const Tester& t);
Tester tester_from_json(const Json& j);

}  // namespace qtomo
