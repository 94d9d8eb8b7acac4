#include "qtomo/harness.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qtomo/designs.hpp"

namespace qtomo {

namespace {

struct TrialResult {
    Vector estimates;
    Vector truths;
};

// Shared per-task machinery: a discrete outcome model per trial plus linear
// estimator coefficients per observable.
struct TaskPlan {
    // one row per model instance (channel/state index), columns = outcomes
    std::vector<RealVector> outcome_probs;
    std::vector<RealVector> cumulative;
    // coefficient table: outcomes x observables
    Matrix coefficients;
    // truth per model instance x observables
    Matrix truths;
    // model instance sampled per trial? (otherwise instance 0 always)
    bool sample_instance = false;
    int num_instances = 1;
    RealVector analytic_mse;  // per observable, per shot
    double eta_analytic = 0.0;
    int design_size = 0;
    // MaxLik path (state task only): reconstruct instead of linear estimate
    bool maxlik = false;
    Povm maxlik_povm;
    std::vector<Matrix> observables;
};

RealVector cumulative_of(const RealVector& p) {
    RealVector c(p.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        acc += p(i);
        c(i) = acc;
    }
    c(p.size() - 1) = 1.0;
    return c;
}

std::int64_t pick_outcome(const RealVector& cumulative, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(rng);
    const double* begin = cumulative.data();
    const double* end = begin + cumulative.size();
    return std::upper_bound(begin, end, u) - begin;
}

Matrix state_from_model(const std::string& model, int d) {
    if (model == "default") return default_state(d);
    if (model == "pure0") {
        Matrix rho = Matrix::Zero(d, d);
        rho(0, 0) = 1.0;
        return rho;
    }
    throw std::invalid_argument("harness: unknown state model '" + model + "'");
}

Povm povm_from_spec(const std::string& spec, int d) {
    if (spec == "pauli6") {
        if (d != 2)
            throw std::invalid_argument("harness: pauli6 needs d = 2");
        return pauli_povm();
    }
    if (spec == "covariant") {
        Matrix seed = Matrix::Zero(d, d);
        seed(0, 0) = 1.0;
        return covariant_povm(seed, clifford_group(d));
    }
    if (spec.rfind("file:", 0) == 0)
        return povm_from_json(read_json_file(spec.substr(5)));
    throw std::invalid_argument("harness: unknown POVM spec '" + spec + "'");
}

// ----------------------------- state task ---------------------------------

TaskPlan plan_state(const ExperimentConfig& cfg) {
    TaskPlan plan;
    const Povm povm = povm_from_spec(cfg.measurement, cfg.d);
    const Ensemble weights = named_ensemble(cfg.ensemble, cfg.d);
    plan.observables = hermitian_basis(cfg.d);
    const int n_obs = int(plan.observables.size());
    const int n_out = povm.num_outcomes();

    std::vector<Matrix> states;
    if (cfg.model == "ensemble") {
        states = weights.states;
        plan.sample_instance = true;
    } else {
        states = {state_from_model(cfg.model, cfg.d)};
    }
    plan.num_instances = int(states.size());

    DualFrame dual;
    if (cfg.dual == DualKind::Canonical)
        dual = canonical_dual(povm);
    else
        dual = optimal_dual(povm, weights);
    plan.coefficients = Matrix(n_out, n_obs);
    for (int j = 0; j < n_obs; ++j)
        plan.coefficients.col(j) =
            coefficients_from_dual(dual, plan.observables[j]);

    plan.truths = Matrix(plan.num_instances, n_obs);
    for (int k = 0; k < plan.num_instances; ++k) {
        plan.outcome_probs.push_back(probabilities(states[k], povm));
        plan.cumulative.push_back(cumulative_of(plan.outcome_probs.back()));
        for (int j = 0; j < n_obs; ++j)
            plan.truths(k, j) = (states[k] * plan.observables[j]).trace();
    }

    // delta is evaluated against the sampling ensemble: the declared weights
    // when the model is drawn from them, the point ensemble otherwise.
    const Ensemble err_ensemble =
        cfg.model == "ensemble" ? weights : uniform_ensemble({states[0]});
    plan.analytic_mse = RealVector(n_obs);
    for (int j = 0; j < n_obs; ++j)
        plan.analytic_mse(j) =
            statistical_error(plan.coefficients.col(j), povm, err_ensemble,
                              plan.observables[j]) /
            double(cfg.shots);

    if (cfg.dual == DualKind::MaxLik) {
        plan.maxlik = true;
        plan.maxlik_povm = povm;
    }
    return plan;
}

// ----------------------------- povm task ----------------------------------

TaskPlan plan_povm(const ExperimentConfig& cfg) {
    if (cfg.model != "pauli6" || cfg.measurement != "pauli6" || cfg.d != 2)
        throw std::invalid_argument(
            "harness: povm task supports model/measurement pauli6 at d = 2");
    TaskPlan plan;
    const Povm unknown = pauli_povm();
    const Povm ancilla = pauli_povm();
    const int d = cfg.d;
    const int n_unknown = unknown.num_outcomes();
    const int n_anc = ancilla.num_outcomes();

    Povm frame;  // transposed ancilla effects seen through |I>> / sqrt(d)
    frame.dim = d;
    for (const auto& n : ancilla.elements)
        frame.elements.push_back(n.transpose());
    Matrix mixed = Matrix::Identity(d, d) / double(d);
    const Ensemble uniform = uniform_ensemble({mixed});
    const DualFrame dual = cfg.dual == DualKind::Canonical
                               ? canonical_dual(frame)
                               : optimal_dual(frame, uniform);

    const auto basis = hermitian_basis(d);
    const int n_obs = n_unknown * int(basis.size());
    const int n_out = n_unknown * n_anc;
    plan.observables = basis;

    RealVector joint(n_out);
    for (int l = 0; l < n_unknown; ++l)
        for (int i = 0; i < n_anc; ++i)
            joint(l * n_anc + i) =
                (unknown.elements[l] * frame.elements[i]).trace().real() / d;
    plan.outcome_probs.push_back(joint);
    plan.cumulative.push_back(cumulative_of(joint));

    plan.coefficients = Matrix::Zero(n_out, n_obs);
    plan.truths = Matrix(1, n_obs);
    plan.analytic_mse = RealVector(n_obs);
    for (int l = 0; l < n_unknown; ++l)
        for (std::size_t b = 0; b < basis.size(); ++b) {
            const int j = l * int(basis.size()) + int(b);
            plan.truths(0, j) = (unknown.elements[l] * basis[b]).trace();
            double second = 0.0;
            for (int i = 0; i < n_anc; ++i) {
                const Complex f =
                    double(d) *
                    (dual.elements[i].adjoint() * basis[b]).trace();
                plan.coefficients(l * n_anc + i, j) = f;
                second += joint(l * n_anc + i) * std::norm(f);
            }
            plan.analytic_mse(j) =
                (second - std::norm(plan.truths(0, j))) / double(cfg.shots);
        }
    return plan;
}

// ---------------------------- process task --------------------------------

TaskPlan plan_process(const ExperimentConfig& cfg) {
    if (cfg.d != 2)
        throw std::invalid_argument(
            "harness: process task is implemented for d = 2");
    if (cfg.measurement.rfind("tester:", 0) != 0)
        throw std::invalid_argument(
            "harness: process measurement must be tester:<kind>");
    const SubspaceKind kind = kind_from_name(cfg.measurement.substr(7));
    if (kind == SubspaceKind::States || kind == SubspaceKind::Povms)
        throw std::invalid_argument(
            "harness: process tester kind must be two-sided");
    const int d = cfg.d;

    TaskPlan plan;
    Vector e0 = Vector::Zero(d);
    e0(0) = 1.0;
    const OptimalSeed seed = optimal_seed(kind, d, e0);
    const auto cliff = clifford_group(d);
    const auto weyl = weyl_operators(d);
    const int n = int(cliff.size());
    const int nw = int(weyl.size());
    plan.design_size = n;

    // pseudo-inverse of Ytilde from the exact block form
    const auto coeffs = covariant_Y_from_seeds({{double(d), seed.psi}}, d);
    const auto projs = schur_projectors(d);
    Matrix pinv_ytilde = projs[0];
    const std::array<double, 3> block{coeffs.a, coeffs.b, coeffs.c};
    for (int a = 0; a < 3; ++a)
        if (block[std::size_t(a)] > 1e-12)
            pinv_ytilde += projs[std::size_t(a) + 1] / block[std::size_t(a)];

    // orthonormal observable basis spanning the estimable subspace
    const Matrix g = subspace_projector(kind, d);
    Eigen::SelfAdjointEigenSolver<Matrix> es(g);
    std::vector<Vector> obs_vecs;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 0.5)
            obs_vecs.push_back(es.eigenvectors().col(i));
    const int n_obs = int(obs_vecs.size());
    for (const auto& v : obs_vecs)
        plan.observables.push_back(devectorize(v, d * d, d * d));

    // model channels
    std::vector<Matrix> chois;
    if (cfg.model == "weyl-ensemble") {
        for (const auto& w : weyl) {
            const Vector v = vectorize(w);
            chois.push_back(v * v.adjoint());
        }
        plan.sample_instance = true;
    } else if (cfg.model.rfind("clifford:", 0) == 0) {
        const int k = std::stoi(cfg.model.substr(9));
        if (k < 0 || k >= n)
            throw std::invalid_argument("harness: clifford index out of range");
        const Vector v = vectorize(cliff[std::size_t(k)]);
        chois.push_back(v * v.adjoint());
    } else {
        throw std::invalid_argument("harness: unknown process model '" +
                                    cfg.model + "'");
    }
    plan.num_instances = int(chois.size());

    // element table: flattened outcome ((g n + h) d^2 + j) d^2 + k
    const int n_out = n * n * nw * nw;
    std::vector<Vector> vec_m(static_cast<std::size_t>(n_out));
    std::vector<Matrix> wpw(static_cast<std::size_t>(nw * nw));
    for (int j = 0; j < nw; ++j)
        for (int k = 0; k < nw; ++k)
            wpw[std::size_t(j * nw + k)] = weyl[std::size_t(j)] * seed.psi *
                                           weyl[std::size_t(k)];
    for (int gi = 0; gi < n; ++gi)
        for (int h = 0; h < n; ++h) {
            const Matrix right = cliff[std::size_t(h)].transpose();
            for (int jk = 0; jk < nw * nw; ++jk) {
                const int e = (gi * n + h) * nw * nw + jk;
                vec_m[std::size_t(e)] = vectorize(
                    cliff[std::size_t(gi)] * wpw[std::size_t(jk)] * right);
            }
        }

    // estimator coefficients f_ej = d <<X_j| Ytilde^+ |m_e>><<m_e||
    plan.coefficients = Matrix(n_out, n_obs);
    std::vector<Vector> w_obs;
    for (int j = 0; j < n_obs; ++j)
        w_obs.push_back(pinv_ytilde * obs_vecs[std::size_t(j)]);
    for (int e = 0; e < n_out; ++e) {
        const Matrix dyad = vec_m[std::size_t(e)] * vec_m[std::size_t(e)].adjoint();
        const Vector vd = vectorize(dyad);
        for (int j = 0; j < n_obs; ++j)
            plan.coefficients(e, j) = double(d) * w_obs[std::size_t(j)].dot(vd);
    }

    // probabilities per channel: |<<m|W>>|^2 / (n^2 d^3)
    const double norm = 1.0 / (double(n) * n * d * d * d);
    plan.truths = Matrix(plan.num_instances, n_obs);
    for (int c = 0; c < plan.num_instances; ++c) {
        RealVector p(n_out);
        const Vector vchoi = vectorize(chois[std::size_t(c)]);
        // p_e = <<m_e| R |m_e>> / (n^2 d^3)
        const Matrix& r = chois[std::size_t(c)];
        for (int e = 0; e < n_out; ++e) {
            const Vector rm = r * vec_m[std::size_t(e)];
            p(e) = norm * vec_m[std::size_t(e)].dot(rm).real();
        }
        const double total = p.sum();
        if (std::abs(total - 1.0) > 1e-9)
            throw std::logic_error("harness: tester probabilities off");
        plan.outcome_probs.push_back(p);
        plan.cumulative.push_back(cumulative_of(p));
        for (int j = 0; j < n_obs; ++j)
            plan.truths(c, j) =
                obs_vecs[std::size_t(j)].dot(vchoi);
    }

    plan.analytic_mse = RealVector::Zero(n_obs);
    double eta = 0.0;
    const double wgt = 1.0 / plan.num_instances;
    for (int j = 0; j < n_obs; ++j) {
        double second = 0.0, m2 = 0.0;
        for (int c = 0; c < plan.num_instances; ++c) {
            for (int e = 0; e < n_out; ++e)
                second += wgt * plan.outcome_probs[std::size_t(c)](e) *
                          std::norm(plan.coefficients(e, j));
            m2 += wgt * std::norm(plan.truths(c, j));
        }
        plan.analytic_mse(j) = (second - m2) / double(cfg.shots);
        eta += second;
    }
    plan.eta_analytic = eta;
    return plan;
}

// ----------------------------- execution ----------------------------------

TrialResult run_trial(const TaskPlan& plan, const ExperimentConfig& cfg,
                      std::size_t trial) {
    Rng rng(mix_seed(cfg.seed, trial));
    int instance = 0;
    if (plan.sample_instance)
        instance = int(rng() % std::uint64_t(plan.num_instances));

    const RealVector& probs = plan.outcome_probs[std::size_t(instance)];
    const int n_obs = int(plan.coefficients.cols());
    TrialResult out;
    out.truths = plan.truths.row(instance).transpose();
    out.estimates = Vector::Zero(n_obs);

    if (cfg.exact) {
        for (int j = 0; j < n_obs; ++j)
            out.estimates(j) =
                estimate_from_frequencies(plan.coefficients.col(j), probs);
        return out;
    }

    std::vector<std::int64_t> counts(std::size_t(probs.size()), 0);
    const RealVector& cum = plan.cumulative[std::size_t(instance)];
    for (std::int64_t s = 0; s < cfg.shots; ++s)
        ++counts[std::size_t(pick_outcome(cum, rng))];

    if (plan.maxlik) {
        const MaxLikResult ml = max_likelihood(plan.maxlik_povm, counts);
        for (int j = 0; j < n_obs; ++j)
            out.estimates(j) = (ml.rho * plan.observables[std::size_t(j)])
                                   .trace();
        return out;
    }
    for (int j = 0; j < n_obs; ++j)
        out.estimates(j) = estimate(plan.coefficients.col(j), counts);
    return out;
}

TaskPlan make_plan(const ExperimentConfig& cfg) {
    switch (cfg.task) {
        case TaskKind::State: return plan_state(cfg);
        case TaskKind::Povm: return plan_povm(cfg);
        case TaskKind::Process: return plan_process(cfg);
    }
    throw std::logic_error("make_plan: unreachable");
}

}  // namespace

std::string task_name(TaskKind task) {
    switch (task) {
        case TaskKind::State: return "state";
        case TaskKind::Process: return "process";
        case TaskKind::Povm: return "povm";
    }
    throw std::logic_error("task_name: unreachable");
}

TaskKind task_from_name(const std::string& name) {
    if (name == "state") return TaskKind::State;
    if (name == "process") return TaskKind::Process;
    if (name == "povm") return TaskKind::Povm;
    throw std::invalid_argument("task_from_name: unknown task '" + name + "'");
}

std::string dual_name(DualKind dual) {
    switch (dual) {
        case DualKind::Canonical: return "canonical";
        case DualKind::Optimal: return "optimal";
        case DualKind::MaxLik: return "maxlik";
    }
    throw std::logic_error("dual_name: unreachable");
}

DualKind dual_from_name(const std::string& name) {
    if (name == "canonical") return DualKind::Canonical;
    if (name == "optimal") return DualKind::Optimal;
    if (name == "maxlik") return DualKind::MaxLik;
    throw std::invalid_argument("dual_from_name: unknown dual '" + name + "'");
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.d < 2) throw std::invalid_argument("config: d >= 2 required");
    if (cfg.shots < 1) throw std::invalid_argument("config: shots >= 1");
    if (cfg.trials < 1) throw std::invalid_argument("config: trials >= 1");
    if (cfg.exact && cfg.dual == DualKind::MaxLik)
        throw std::invalid_argument("config: exact mode needs a linear dual");
    if (cfg.task != TaskKind::State && cfg.dual == DualKind::MaxLik)
        throw std::invalid_argument(
            "config: maxlik dual is a state-task option");
    if (cfg.ensemble != "default" && cfg.ensemble != "skewed")
        throw std::invalid_argument("config: unknown ensemble '" +
                                    cfg.ensemble + "'");
    switch (cfg.task) {
        case TaskKind::State:
            if (cfg.model != "default" && cfg.model != "pure0" &&
                cfg.model != "ensemble")
                throw std::invalid_argument("config: unknown state model '" +
                                            cfg.model + "'");
            if (cfg.measurement != "pauli6" &&
                cfg.measurement != "covariant" &&
                cfg.measurement.rfind("file:", 0) != 0)
                throw std::invalid_argument(
                    "config: unknown state measurement '" + cfg.measurement +
                    "'");
            break;
        case TaskKind::Process:
            if (cfg.d != 2)
                throw std::invalid_argument(
                    "config: process task is implemented for d = 2");
            if (cfg.model != "weyl-ensemble" &&
                cfg.model.rfind("clifford:", 0) != 0)
                throw std::invalid_argument(
                    "config: unknown process model '" + cfg.model + "'");
            if (cfg.measurement.rfind("tester:", 0) != 0)
                throw std::invalid_argument(
                    "config: process measurement must be tester:<kind>");
            break;
        case TaskKind::Povm:
            if (cfg.model != "pauli6" || cfg.measurement != "pauli6" ||
                cfg.d != 2)
                throw std::invalid_argument(
                    "config: povm task supports model/measurement pauli6 at "
                    "d = 2");
            break;
    }
}

std::vector<std::int64_t> sample_counts(const RealVector& probabilities,
                                        std::int64_t shots, Rng& rng,
                                        double tol) {
    if (probabilities.size() == 0)
        throw std::invalid_argument("sample_counts: empty distribution");
    RealVector p = probabilities.cwiseMax(0.0);
    const double total = p.sum();
    if (std::abs(total - 1.0) > tol ||
        probabilities.minCoeff() < -tol)
        throw std::invalid_argument("sample_counts: not a distribution");
    p /= total;
    const RealVector cum = cumulative_of(p);
    std::vector<std::int64_t> counts(std::size_t(p.size()), 0);
    for (std::int64_t s = 0; s < shots; ++s)
        ++counts[std::size_t(pick_outcome(cum, rng))];
    return counts;
}

std::vector<std::int64_t> sample_counts(const Povm& povm, const Matrix& rho,
                                        std::int64_t shots, Rng& rng) {
    return sample_counts(probabilities(rho, povm), shots, rng);
}

std::vector<std::int64_t> sample_counts(const Tester& t,
                                        const ChoiOperator& choi,
                                        std::int64_t shots, Rng& rng) {
    return sample_counts(tester_probabilities(t, choi), shots, rng);
}

ExperimentRecord run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const TaskPlan plan = make_plan(cfg);
    const int n_obs = int(plan.coefficients.cols());
    const int trials = cfg.trials;

    ExperimentRecord rec;
    rec.config = cfg;
    rec.num_observables = n_obs;
    rec.design_size = plan.design_size;
    rec.estimates = Matrix(trials, n_obs);
    rec.truths = Matrix(trials, n_obs);

#pragma omp parallel for schedule(static)
    for (std::int64_t t = 0; t < trials; ++t) {
        const TrialResult r = run_trial(plan, cfg, std::size_t(t));
        rec.estimates.row(t) = r.estimates.transpose();
        rec.truths.row(t) = r.truths.transpose();
    }

    rec.mean_estimate = Vector::Zero(n_obs);
    rec.empirical_mse = RealVector::Zero(n_obs);
    double second_moment = 0.0;
    for (int t = 0; t < trials; ++t) {
        for (int j = 0; j < n_obs; ++j) {
            rec.mean_estimate(j) += rec.estimates(t, j) / double(trials);
            rec.empirical_mse(j) +=
                std::norm(rec.estimates(t, j) - rec.truths(t, j)) /
                double(trials);
            second_moment += std::norm(rec.truths(t, j)) / double(trials);
        }
    }
    rec.analytic_mse = plan.analytic_mse;
    rec.empirical_total = rec.empirical_mse.sum();
    rec.analytic_total = rec.analytic_mse.sum();
    rec.ratio = rec.analytic_total > 0.0
                    ? rec.empirical_total / rec.analytic_total
                    : 0.0;
    if (cfg.task == TaskKind::Process) {
        rec.eta_analytic = plan.eta_analytic;
        rec.eta_empirical =
            double(cfg.shots) * rec.empirical_total + second_moment;
    }
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return rec;
}

DualComparison compare_duals(const ExperimentConfig& cfg,
                             const std::vector<DualKind>& duals) {
    DualComparison cmp;
    for (DualKind dual : duals) {
        ExperimentConfig c = cfg;
        c.dual = dual;
        cmp.names.push_back(dual_name(dual));
        cmp.records.push_back(run_experiment(c));
    }
    return cmp;
}

std::string comparison_csv(const DualComparison& cmp) {
    std::ostringstream os;
    os << "dual,observable,analytic_mse,empirical_mse\n";
    for (std::size_t k = 0; k < cmp.records.size(); ++k) {
        const ExperimentRecord& rec = cmp.records[k];
        for (int j = 0; j < rec.num_observables; ++j) {
            char buf[128];
            std::snprintf(buf, sizeof(buf), "%s,%d,%.12g,%.12g\n",
                          cmp.names[k].c_str(), j, rec.analytic_mse(j),
                          rec.empirical_mse(j));
            os << buf;
        }
    }
    return os.str();
}

Json config_to_json(const ExperimentConfig& cfg) {
    return Json{{"task", task_name(cfg.task)},
                {"d", cfg.d},
                {"shots", cfg.shots},
                {"trials", cfg.trials},
                {"exact", cfg.exact},
                {"model", cfg.model},
                {"measurement", cfg.measurement},
                {"ensemble", cfg.ensemble},
                {"dual", dual_name(cfg.dual)},
                {"seed", cfg.seed},
                {"out", cfg.out}};
}

ExperimentConfig config_from_json(const Json& j) {
    ExperimentConfig cfg;
    cfg.task = task_from_name(j.at("task").get<std::string>());
    cfg.d = j.at("d").get<int>();
    cfg.shots = j.at("shots").get<std::int64_t>();
    cfg.trials = j.at("trials").get<int>();
    cfg.exact = j.value("exact", false);
    cfg.model = j.at("model").get<std::string>();
    cfg.measurement = j.at("measurement").get<std::string>();
    cfg.ensemble = j.value("ensemble", std::string("default"));
    cfg.dual = dual_from_name(j.at("dual").get<std::string>());
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.out = j.value("out", std::string());
    return cfg;
}

Json record_to_json(const ExperimentRecord& rec) {
    Json j;
    j["schema"] = 1;
    j["config"] = config_to_json(rec.config);
    j["num_observables"] = rec.num_observables;
    j["design_size"] = rec.design_size;
    j["estimates"] = matrix_to_json(rec.estimates);
    j["truths"] = matrix_to_json(rec.truths);
    j["mean_estimate"] = matrix_to_json(rec.mean_estimate);
    Json emse = Json::array(), amse = Json::array();
    for (Eigen::Index i = 0; i < rec.empirical_mse.size(); ++i) {
        emse.push_back(rec.empirical_mse(i));
        amse.push_back(rec.analytic_mse(i));
    }
    j["empirical_mse"] = emse;
    j["analytic_mse"] = amse;
    j["empirical_total"] = rec.empirical_total;
    j["analytic_total"] = rec.analytic_total;
    j["ratio"] = rec.ratio;
    j["eta_empirical"] = rec.eta_empirical;
    j["eta_analytic"] = rec.eta_analytic;
    j["wall_seconds"] = rec.wall_seconds;
    return j;
}

ExperimentRecord record_from_json(const Json& j) {
    if (j.at("schema").get<int>() != 1)
        throw std::invalid_argument("record: unsupported schema");
    ExperimentRecord rec;
    rec.config = config_from_json(j.at("config"));
    rec.num_observables = j.at("num_observables").get<int>();
    rec.design_size = j.at("design_size").get<int>();
    rec.estimates = matrix_from_json(j.at("estimates"));
    rec.truths = matrix_from_json(j.at("truths"));
    rec.mean_estimate = Vector(matrix_from_json(j.at("mean_estimate")));
    const auto& emse = j.at("empirical_mse");
    const auto& amse = j.at("analytic_mse");
    rec.empirical_mse = RealVector(emse.size());
    rec.analytic_mse = RealVector(amse.size());
    for (std::size_t i = 0; i < emse.size(); ++i) {
        rec.empirical_mse(Eigen::Index(i)) = emse[i].get<double>();
        rec.analytic_mse(Eigen::Index(i)) = amse[i].get<double>();
    }
    rec.empirical_total = j.at("empirical_total").get<double>();
    rec.analytic_total = j.at("analytic_total").get<double>();
    rec.ratio = j.at("ratio").get<double>();
    rec.eta_empirical = j.at("eta_empirical").get<double>();
    rec.eta_analytic = j.at("eta_analytic").get<double>();
    rec.wall_seconds = j.at("wall_seconds").get<double>();
    return rec;
}

void write_record(const std::string& path, const ExperimentRecord& rec,
                  bool with_csv) {
    write_json_file(path, record_to_json(rec));
    if (!with_csv) return;
    std::ofstream csv(path + ".csv");
    if (!csv) throw std::runtime_error("write_record: cannot open csv");
    csv << "trial,estimate_re,estimate_im,sq_error\n";
    char buf[160];
    for (Eigen::Index t = 0; t < rec.estimates.rows(); ++t)
        for (Eigen::Index j = 0; j < rec.estimates.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%.17g\n",
                          static_cast<long long>(t),
                          rec.estimates(t, j).real(),
                          rec.estimates(t, j).imag(),
                          std::norm(rec.estimates(t, j) - rec.truths(t, j)));
            csv << buf;
        }
}

ExperimentRecord read_record(const std::string& path) {
    return record_from_json(read_json_file(path));
}

Matrix default_state(int d) {
    Matrix f(d, d);
    const double inv = 1.0 / std::sqrt(double(d));
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
            f(j, k) = inv * std::polar(1.0, 2.0 * M_PI * j * k / d);
    RealVector lambda(d);
    for (int k = 0; k < d; ++k)
        lambda(k) = 2.0 * (d - k) / (double(d) * (d + 1));
    return f * lambda.asDiagonal() * f.adjoint();
}

Ensemble named_ensemble(const std::string& name, int d) {
    if (name == "default") {
        if (d == 2) return pauli_eigenstate_ensemble();
        std::vector<Matrix> states;
        Matrix e0 = Matrix::Zero(d, d);
        e0(0, 0) = 1.0;
        for (const auto& w : weyl_operators(d))
            states.push_back(w * e0 * w.adjoint());
        return uniform_ensemble(states);
    }
    if (name == "skewed") {
        if (d != 2)
            throw std::invalid_argument("named_ensemble: skewed needs d = 2");
        Ensemble e = pauli_eigenstate_ensemble();
        e.priors = {0.1, 0.1, 0.1, 0.1, 0.4, 0.2};
        return e;
    }
    throw std::invalid_argument("named_ensemble: unknown ensemble '" + name +
                                "'");
}

}  // namespace qtomo
