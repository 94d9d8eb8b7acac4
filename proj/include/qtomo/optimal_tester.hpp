#pragma once

#include <array>
#include <string>
#include <utility>

#include "qtomo/combs.hpp"
#include "qtomo/parallel.hpp"

namespace qtomo {

// Subspaces of transformations a tomographic setup can be optimized for.
// QuantumOperations is the full operator space; Channels restricts to
// trace-preserving Chois, UnitalChannels additionally to unital ones.
// States and Povms are the degenerate setups with a trivial input (resp.
// output) factor.
enum class SubspaceKind { QuantumOperations, Channels, UnitalChannels, States, Povms };

std::string kind_name(SubspaceKind kind);
SubspaceKind kind_from_name(const std::string& name);

// Coefficients of the two-sided twirl of the second-moment operator
// Y = sum_i d |Pi_i>><<Pi_i| / Tr[Pi_i]:  Ytilde = P1 + a P2 + b P3 + c P4.
struct SchurCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    int d = 0;
};

// Seed operator Psi = [d^-1 (1-beta) I + beta |psi><psi|]^(1/2) generating the
// covariant tester; unit Hilbert-Schmidt norm.
struct OptimalSeed {
    Matrix psi;
    double beta = 0.0;
    Vector fiducial;
    SubspaceKind kind = SubspaceKind::QuantumOperations;
};

// Weighted observable set G = sum_n q_n |X_n>><<X_n|.
struct WeightedObservables {
    std::vector<Matrix> observables;
    RealVector weights;
};

// The four isotypic projectors of the commutant of U x V x conj U x conj V on
// the vectorized (out, in) operator space, ordered
//   P1 = Om13 x Om24, P2 = (I-Om)13 x Om24,
//   P3 = Om13 x (I-Om)24, P4 = (I-Om)13 x (I-Om)24,
// where the pairs (1,3) and (2,4) are the out row/column and in row/column
// factors and Om = |I>><<I| / d.
std::array<Matrix, 4> schur_projectors(int d);

Matrix ytilde_matrix(const SchurCoefficients& coeffs);

// Projector onto the vectorized subspace reachable by the kind: identity for
// QuantumOperations, P1+P2+P4 for Channels, P1+P4 for UnitalChannels.
Matrix subspace_projector(SubspaceKind kind, int d);

Matrix observables_operator(const WeightedObservables& g);

// Figure of merit eta = Tr[Y^+ G]; +infinity when G has weight on the kernel
// of Y (the setup cannot resolve those directions).
double eta(const Matrix& y, const Matrix& g, double tol_rel = kRankTolRel);

// Schur coefficients of the covariant tester generated by rank-one seeds
// Pi_i = alpha_i |Psi_i>><<Psi_i| with sum alpha_i = d, Tr[Psi_i Psi_i^dag]=1.
SchurCoefficients covariant_Y_from_seeds(
    const std::vector<std::pair<double, Matrix>>& seeds, int d);

// Y = sum_i d |Pi_i>><<Pi_i| / Tr[Pi_i] for an explicit tester.
Matrix y_from_tester(const Tester& t);

// Closed forms Tr[Ytilde^+ G] for G = g1 P1 + g2 P2 + g3 P3 + g4 P4 and for
// the three subspace projectors in the single-seed family (b = a).
double eta_schur(const SchurCoefficients& coeffs, const std::array<double, 4>& g);
double eta_subspace(double a, int d, SubspaceKind kind);

double optimal_A(SubspaceKind kind, int d);
double optimal_eta_bound(SubspaceKind kind, int d);
double seed_purity_target(SubspaceKind kind, int d);

OptimalSeed optimal_seed(SubspaceKind kind, int d, const Vector& psi);

// Informational completeness of the covariant tester generated by a seed, on
// the blocks the seed's kind needs.  `overlaps` are the normalized seed
// overlaps with the four blocks; `min_eigenvalue` is the smallest eigenvalue
// of the design-twirled frame operator restricted to the needed blocks.
struct IcCheck {
    std::array<double, 4> overlaps{};
    double min_eigenvalue = 0.0;
    bool ok = false;
};
IcCheck check_ic_covariant(const OptimalSeed& seed,
                           const std::vector<Matrix>& design);

// Optimal figure of merit for the degenerate setups (States, Povms):
// d^3 + d^2 - d, and the same value recomputed through the degenerated
// machinery (only one nontrivial block survives).
double special_case_eta(SubspaceKind kind, int d);
double special_case_eta_pipeline(SubspaceKind kind, int d);

// Covariant tester {(d/|D|^2) |U_g Psi V_h^T>><<U_g Psi V_h^T|} over a finite
// 2-design D standing in for the Haar measure; normalization sigma = I/d.
Tester build_optimal_tester(SubspaceKind kind, int d, const OptimalSeed& seed,
                            const std::vector<Matrix>& design);

// CSV table: kind,d,A_opt,beta,purity,eta_bound,eta_computed,residual
std::string optimal_results_csv(const std::vector<SubspaceKind>& kinds,
                                const std::vector<int>& dims);

}  // namespace qtomo
