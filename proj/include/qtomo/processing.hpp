#pragma once

#include <cstdint>

#include "qtomo/frames.hpp"

namespace qtomo {

// Finite ensemble of input states with prior weights.  The per-shot
// statistical error of an estimator is judged against this ensemble.
struct Ensemble {
    std::vector<Matrix> states;
    std::vector<double> priors;

    Matrix average() const;
    // m2(X) = sum_k q_k |Tr[rho_k X]|^2
    double second_moment(const Matrix& x) const;
};

bool validate_ensemble(const Ensemble& e, double tol = kHermTol);

Ensemble uniform_ensemble(std::vector<Matrix> states);

// The six eigenstates of the Pauli operators with equal weights (average I/2).
Ensemble pauli_eigenstate_ensemble();

// ------------------------------ estimation ---------------------------------

// Born probabilities p(l|rho); negative round-off is clamped at zero.
RealVector probabilities(const Matrix& rho, const Povm& povm,
                         double tol = kHermTol);

// f_l = <<Q_l|X>> for a processing dual {Q_l}
Vector coefficients_from_dual(const DualFrame& dual, const Matrix& x);

// sum_l f_l nu_l with nu the empirical frequencies of `counts`
Complex estimate(const Vector& coefficients,
                 const std::vector<std::int64_t>& counts);
Complex estimate_from_frequencies(const Vector& coefficients,
                                  const RealVector& frequencies);

// Per-shot statistical error of the linear estimator with coefficients f:
//   delta(X) = sum_l |f_l|^2 p(l|rho_E) - m2(X),
// where rho_E is the ensemble average.  Divide by the shot count for the
// mean-squared error of the N-shot average (see statistical_error_per_shots).
double statistical_error(const Vector& coefficients, const Povm& povm,
                         const Ensemble& ensemble, const Matrix& x);
double statistical_error_per_shots(const Vector& coefficients,
                                   const Povm& povm, const Ensemble& ensemble,
                                   const Matrix& x, std::int64_t shots);

// ------------------------------ optimal processing -------------------------

// Minimum-norm optimal dual: minimizes delta(X) simultaneously for every X
// among all duals of the POVM, at fixed ensemble.  Outcomes with
// p(l|rho_E) <= prune_tol are pruned before inversion and receive zero dual
// elements; the remaining frame must stay informationally complete.
DualFrame optimal_dual(const Povm& povm, const Ensemble& ensemble,
                       double prune_tol = 1e-12, double tol_rel = kRankTolRel);

// delta_min(X) = <<X| Y^+ |X>> - m2(X) with Y = sum_l |P_l>><<P_l| / p_l
// (pruned sum); equals statistical_error of the optimal dual.
double min_error_closed_form(const Povm& povm, const Ensemble& ensemble,
                             const Matrix& x, double prune_tol = 1e-12);

// ------------------------------ noise unbiasing ----------------------------

enum class NoisePicture { Schroedinger, Heisenberg };

// Given a dual {Q_l} of the ideal POVM {P_l} and an invertible noise channel
// N (Kraus form), returns the dual of the distorted POVM {N^dag(P_l)} so the
// estimator stays unbiased when sampling the noisy statistics.  `picture`
// states whether the Kraus list describes the action on states
// (Schroedinger) or on effects (Heisenberg).
DualFrame unbias_noise(const DualFrame& dual, const std::vector<Matrix>& kraus,
                       NoisePicture picture = NoisePicture::Schroedinger,
                       double tol_rel = 1e-9);

// Closed-form unbiased estimator duals for the six-outcome Pauli POVM under
// depolarizing noise of strength p: Q_{i,+-} = I/2 +- 3 sigma_i / (2(1-p)).
DualFrame qubit_estimator(double p);

// Kraus operators of the depolarizing channel D_p(X) = (1-p)X + p Tr[X] I/d.
std::vector<Matrix> depolarizing_kraus(double p, int d);

// ------------------------------ maximum likelihood -------------------------

struct MaxLikOptions {
    int max_iterations = 20000;
    double tol = 1e-10;        // on ||R(rho) rho - rho||_1
    double damping = 1e-3;     // mixing toward I/d each step
};

struct MaxLikResult {
    Matrix rho;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;               // final ||R(rho) rho - rho||_1
    std::vector<double> loglik_trace;    // log-likelihood per accepted iterate
};

MaxLikResult max_likelihood(const Povm& povm,
                            const std::vector<std::int64_t>& counts,
                            const MaxLikOptions& opts = {});

// (1/N) sum_l n_l log p(l|rho); -inf if some p vanishes where n_l > 0
double log_likelihood(const Povm& povm,
                      const std::vector<std::int64_t>& counts,
                      const Matrix& rho);

// sum_l nu_l log(nu_l / p_l), with 0 log 0 = 0
double kl_divergence(const RealVector& frequencies,
                     const RealVector& probabilities);

// Shannon entropy -sum nu log nu
double entropy(const RealVector& frequencies);

}  // namespace qtomo
