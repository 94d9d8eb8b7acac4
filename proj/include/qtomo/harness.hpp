#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtomo/optimal_tester.hpp"
#include "qtomo/processing.hpp"

namespace qtomo {

enum class TaskKind { State, Process, Povm };
enum class DualKind { Canonical, Optimal, MaxLik };

std::string task_name(TaskKind task);
TaskKind task_from_name(const std::string& name);
std::string dual_name(DualKind dual);
DualKind dual_from_name(const std::string& name);

// Full description of a simulated tomography experiment.
//
// model (the true object):
//   state task:   "default" (fixed interior state), "pure0", "ensemble"
//                 (fresh draw from the ensemble each trial)
//   process task: "weyl-ensemble" (uniform random Weyl unitary channel per
//                 trial; ensemble average is the depolarizing Choi I/d),
//                 "clifford:<k>" (fixed unitary channel)
//   povm task:    "pauli6"
// measurement:
//   state task:   "pauli6", "covariant" (Clifford-covariant POVM),
//                 "file:<path>" (POVM JSON)
//   process task: "tester:unital" | "tester:qops" | "tester:channels";
//                 realized per shot by sampling a fresh Clifford pair (g,h)
//                 and measuring the two Weyl-corrected Bell outcomes (j,k)
//   povm task:    "pauli6" (known ancilla POVM)
// ensemble (weights defining delta and the optimal dual):
//   "default" (Pauli eigenstates at d=2, Weyl orbit states otherwise),
//   "skewed" (Pauli eigenstates with priors 1,1,1,1,4,2 over 10; the
//   average I/2 + Z/10 makes the optimal dual differ from the canonical)
//
// exact = true replaces sampling with exact outcome probabilities (the
// N = infinity limit); it requires a linear dual.
struct ExperimentConfig {
    TaskKind task = TaskKind::State;
    int d = 2;
    std::int64_t shots = 10000;
    int trials = 100;
    bool exact = false;
    std::string model = "default";
    std::string measurement = "pauli6";
    std::string ensemble = "default";
    DualKind dual = DualKind::Optimal;
    std::uint64_t seed = 1;
    std::string out;
};

void validate_config(const ExperimentConfig& cfg);

// Simulation outcome.  estimates/truths are trials x observables; the
// per-shot analytic error is delta(X_j) (state/povm) or the tester-native
// variance (process), so analytic_mse = delta/N.  For the process task the
// flattened outcome index is ((g*design_size + h)*d^2 + j)*d^2 + k with (g,h)
// the sampled Clifford pair and (j,k) the two Bell outcomes, and
// eta_analytic/eta_empirical compare N*sum_j mse_j + sum_j |<<X_j|R>>|^2
// against Tr[Ytilde^+ G].
struct ExperimentRecord {
    ExperimentConfig config;
    int num_observables = 0;
    int design_size = 0;  // process task only
    Matrix estimates;
    Matrix truths;
    Vector mean_estimate;        // per observable
    RealVector empirical_mse;    // per observable
    RealVector analytic_mse;     // per observable
    double empirical_total = 0.0;
    double analytic_total = 0.0;
    double ratio = 0.0;
    double eta_empirical = 0.0;
    double eta_analytic = 0.0;
    double wall_seconds = 0.0;
};

// Multinomial draw of `shots` outcomes by inverse-CDF sampling; probabilities
// are clamped at zero and renormalized within tol.
std::vector<std::int64_t> sample_counts(const RealVector& probabilities,
                                        std::int64_t shots, Rng& rng,
                                        double tol = 1e-9);
std::vector<std::int64_t> sample_counts(const Povm& povm, const Matrix& rho,
                                        std::int64_t shots, Rng& rng);
std::vector<std::int64_t> sample_counts(const Tester& t,
                                        const ChoiOperator& choi,
                                        std::int64_t shots, Rng& rng);

ExperimentRecord run_experiment(const ExperimentConfig& cfg);

struct DualComparison {
    std::vector<std::string> names;
    std::vector<ExperimentRecord> records;
};

// Runs the config once per dual choice (same seed and model stream).
DualComparison compare_duals(const ExperimentConfig& cfg,
                             const std::vector<DualKind>& duals);
std::string comparison_csv(const DualComparison& cmp);

// JSON record with "schema": 1; bit-exact round trip.  write_record also
// emits a CSV sidecar <path>.csv with columns
// trial,estimate_re,estimate_im,sq_error (one row per trial and observable).
void write_record(const std::string& path, const ExperimentRecord& rec,
                  bool with_csv = true);
ExperimentRecord read_record(const std::string& path);
Json record_to_json(const ExperimentRecord& rec);
ExperimentRecord record_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const Json& j);

// Fixed interior reference state with spectrum proportional to (d, ..., 1)
// in a Fourier-rotated basis.
Matrix default_state(int d);

// Weight ensemble named by the config.
Ensemble named_ensemble(const std::string& name, int d);

}  // namespace qtomo
