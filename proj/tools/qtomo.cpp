#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "qtomo/harness.hpp"

namespace {

using namespace qtomo;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void print_kv(const std::string& key, const std::string& value) {
    std::printf("%-16s %s\n", key.c_str(), value.c_str());
}

void print_record(const ExperimentRecord& rec, bool as_json) {
    if (as_json) {
        std::printf("%s\n", record_to_json(rec).dump(2).c_str());
        return;
    }
    print_kv("task", task_name(rec.config.task));
    print_kv("d", std::to_string(rec.config.d));
    print_kv("shots", std::to_string(rec.config.shots));
    print_kv("trials", std::to_string(rec.config.trials));
    print_kv("model", rec.config.model);
    print_kv("measurement", rec.config.measurement);
    print_kv("dual", dual_name(rec.config.dual));
    print_kv("seed", std::to_string(rec.config.seed));
    print_kv("observables", std::to_string(rec.num_observables));
    if (rec.design_size > 0)
        print_kv("design_size", std::to_string(rec.design_size));
    print_kv("analytic_total", fmt(rec.analytic_total));
    print_kv("empirical_total", fmt(rec.empirical_total));
    print_kv("ratio", fmt(rec.ratio));
    if (rec.config.task == TaskKind::Process) {
        print_kv("eta_analytic", fmt(rec.eta_analytic));
        print_kv("eta_empirical", fmt(rec.eta_empirical));
    }
    print_kv("wall_seconds", fmt(rec.wall_seconds));
}

// Common experiment flags; option pointers let explicit flags override the
// values read from --config.
struct TomoOptions {
    std::string config_path;
    int d = 2;
    std::int64_t shots = 10000;
    int trials = 100;
    std::uint64_t seed = 1;
    std::string povm, dual, kind, model, ensemble, out;
    bool exact = false;
    bool json = false;

    CLI::Option* o_config = nullptr;
    CLI::Option* o_d = nullptr;
    CLI::Option* o_shots = nullptr;
    CLI::Option* o_trials = nullptr;
    CLI::Option* o_seed = nullptr;
    CLI::Option* o_povm = nullptr;
    CLI::Option* o_dual = nullptr;
    CLI::Option* o_kind = nullptr;
    CLI::Option* o_model = nullptr;
    CLI::Option* o_ensemble = nullptr;
    CLI::Option* o_out = nullptr;
    CLI::Option* o_exact = nullptr;
};

void add_common_options(CLI::App* cmd, TomoOptions& t) {
    t.o_config = cmd->add_option("--config", t.config_path,
                                 "experiment config JSON; flags override");
    t.o_d = cmd->add_option("--d", t.d, "Hilbert space dimension");
    t.o_shots = cmd->add_option("--shots", t.shots, "shots per trial");
    t.o_trials = cmd->add_option("--trials", t.trials, "number of trials");
    t.o_seed = cmd->add_option("--seed", t.seed, "rng seed");
    t.o_model = cmd->add_option("--model", t.model, "true object spec");
    t.o_out = cmd->add_option("--out", t.out, "record output path");
    t.o_exact = cmd->add_flag("--exact", t.exact,
                              "use exact probabilities (N = infinity)");
    cmd->add_flag("--json", t.json, "emit the record as JSON on stdout");
}

ExperimentConfig build_config(const TomoOptions& t, TaskKind task,
                              const ExperimentConfig& base) {
    ExperimentConfig cfg = base;
    if (t.o_config->count()) {
        Json j = read_json_file(t.config_path);
        // accept a full record file and reuse its embedded config
        if (j.contains("config")) j = j.at("config");
        cfg = config_from_json(j);
    }
    cfg.task = task;
    if (t.o_d->count()) cfg.d = t.d;
    if (t.o_shots->count()) cfg.shots = t.shots;
    if (t.o_trials->count()) cfg.trials = t.trials;
    if (t.o_seed->count()) cfg.seed = t.seed;
    if (t.o_model->count()) cfg.model = t.model;
    if (t.o_povm && t.o_povm->count()) cfg.measurement = t.povm;
    if (t.o_kind && t.o_kind->count()) cfg.measurement = "tester:" + t.kind;
    if (t.o_dual && t.o_dual->count()) cfg.dual = dual_from_name(t.dual);
    if (t.o_ensemble && t.o_ensemble->count()) cfg.ensemble = t.ensemble;
    if (t.o_out->count()) cfg.out = t.out;
    if (t.o_exact->count()) cfg.exact = t.exact;
    return cfg;
}

void run_tomo(const TomoOptions& t, TaskKind task,
              const ExperimentConfig& base) {
    const ExperimentConfig cfg = build_config(t, task, base);
    const ExperimentRecord rec = run_experiment(cfg);
    if (!cfg.out.empty()) write_record(cfg.out, rec);
    print_record(rec, t.json);
}

void run_duals(const TomoOptions& t, bool with_maxlik) {
    ExperimentConfig base;
    base.task = TaskKind::State;
    // draw the true state from the weight ensemble so every dual is scored
    // on the ensemble the optimal dual is tuned for
    base.model = "ensemble";
    ExperimentConfig cfg = build_config(t, TaskKind::State, base);
    std::vector<DualKind> duals{DualKind::Canonical, DualKind::Optimal};
    if (with_maxlik) duals.push_back(DualKind::MaxLik);
    const DualComparison cmp = compare_duals(cfg, duals);
    if (!cfg.out.empty()) {
        std::ofstream out(cfg.out);
        if (!out) throw std::runtime_error("duals: cannot open " + cfg.out);
        out << comparison_csv(cmp);
    }
    if (t.json) {
        Json j;
        j["names"] = cmp.names;
        Json records = Json::array();
        for (const ExperimentRecord& rec : cmp.records)
            records.push_back(record_to_json(rec));
        j["records"] = records;
        std::printf("%s\n", j.dump(2).c_str());
        return;
    }
    std::printf("%-10s %16s %16s %10s\n", "dual", "analytic_total",
                "empirical_total", "ratio");
    for (std::size_t k = 0; k < cmp.records.size(); ++k)
        std::printf("%-10s %16.10g %16.10g %10.6g\n", cmp.names[k].c_str(),
                    cmp.records[k].analytic_total,
                    cmp.records[k].empirical_total, cmp.records[k].ratio);
}

void run_optimal_tester(const std::string& kind_name, int d, bool as_json) {
    const SubspaceKind kind = kind_from_name(kind_name);
    const double a_opt = optimal_A(kind, d);
    const double bound = optimal_eta_bound(kind, d);
    const double purity = seed_purity_target(kind, d);
    Vector e0 = Vector::Zero(d);
    e0(0) = 1.0;
    const OptimalSeed seed = optimal_seed(kind, d, e0);
    if (as_json) {
        Json j{{"kind", kind_name}, {"d", d},          {"A_opt", a_opt},
               {"beta", seed.beta}, {"purity", purity}, {"eta_bound", bound}};
        std::printf("%s\n", j.dump(2).c_str());
        return;
    }
    print_kv("kind", kind_name);
    print_kv("d", std::to_string(d));
    print_kv("A_opt", fmt(a_opt));
    print_kv("beta", fmt(seed.beta));
    print_kv("purity", fmt(purity));
    print_kv("eta_bound", fmt(bound));
}

int run_validate(const std::string& comb_path, const std::string& tester_path,
                 const std::string& povm_path, bool as_json) {
    bool all_ok = true;
    Json out = Json::array();

    if (!comb_path.empty()) {
        const QuantumComb comb = comb_from_json(read_json_file(comb_path));
        const CombCheck check = validate_comb(comb);
        all_ok = all_ok && check.ok;
        Json j{{"file", comb_path},
               {"object", "comb"},
               {"ok", check.ok},
               {"cp_min_eigenvalue", check.cp_min_eigenvalue},
               {"hermiticity_residual", check.hermiticity_residual},
               {"normalization_residuals", check.normalization_residuals},
               {"scalar_residual", check.scalar_residual}};
        out.push_back(j);
    }
    if (!tester_path.empty()) {
        const Tester t = tester_from_json(read_json_file(tester_path));
        const TesterCheck check = validate_tester(t);
        all_ok = all_ok && check.ok;
        Json j{{"file", tester_path},
               {"object", "tester"},
               {"ok", check.ok},
               {"psd_min_eigenvalue", check.psd_min_eigenvalue},
               {"normalization_residual", check.normalization_residual},
               {"sigma_trace_error", check.sigma_trace_error}};
        out.push_back(j);
    }
    if (!povm_path.empty()) {
        const Povm p = povm_from_json(read_json_file(povm_path));
        const PovmValidation check = validate_povm(p);
        all_ok = all_ok && check.ok;
        Json j{{"file", povm_path},
               {"object", "povm"},
               {"ok", check.ok},
               {"worst_negative_eigenvalue", check.worst_negative_eigenvalue},
               {"hermiticity_residual", check.hermiticity_residual},
               {"completeness_residual", check.completeness_residual}};
        out.push_back(j);
    }

    if (as_json) {
        std::printf("%s\n", out.dump(2).c_str());
    } else {
        for (const Json& j : out) {
            std::printf("%s %s: %s\n", j.at("object").get<std::string>().c_str(),
                        j.at("file").get<std::string>().c_str(),
                        j.at("ok").get<bool>() ? "pass" : "fail");
            for (const auto& [key, value] : j.items())
                if (key != "file" && key != "object" && key != "ok")
                    print_kv("  " + key, value.dump());
        }
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"operator frames, optimal testers and tomography simulation"};
    app.require_subcommand(1);
    int exit_code = 0;

    TomoOptions state_opts;
    CLI::App* state_cmd =
        app.add_subcommand("state-tomo", "simulate state tomography");
    add_common_options(state_cmd, state_opts);
    state_opts.o_povm = state_cmd->add_option(
        "--povm", state_opts.povm, "measurement: pauli6|covariant|file:PATH");
    state_opts.o_dual = state_cmd->add_option("--dual", state_opts.dual,
                                              "dual frame choice")
                            ->check(CLI::IsMember(
                                {"canonical", "optimal", "maxlik"}));
    state_opts.o_ensemble = state_cmd->add_option(
        "--ensemble", state_opts.ensemble, "weight ensemble: default|skewed");
    state_cmd->callback([&] {
        ExperimentConfig base;
        base.task = TaskKind::State;
        run_tomo(state_opts, TaskKind::State, base);
    });

    TomoOptions process_opts;
    CLI::App* process_cmd =
        app.add_subcommand("process-tomo", "simulate process tomography");
    add_common_options(process_cmd, process_opts);
    process_opts.o_kind =
        process_cmd
            ->add_option("--kind", process_opts.kind,
                         "tester subspace: qops|channels|unital")
            ->check(CLI::IsMember({"qops", "channels", "unital"}));
    process_cmd->callback([&] {
        ExperimentConfig base;
        base.task = TaskKind::Process;
        base.model = "weyl-ensemble";
        base.measurement = "tester:unital";
        run_tomo(process_opts, TaskKind::Process, base);
    });

    TomoOptions povm_opts;
    CLI::App* povm_cmd =
        app.add_subcommand("povm-tomo", "simulate detector tomography");
    add_common_options(povm_cmd, povm_opts);
    povm_opts.o_dual = povm_cmd->add_option("--dual", povm_opts.dual,
                                            "dual frame choice")
                           ->check(CLI::IsMember({"canonical", "optimal"}));
    povm_cmd->callback([&] {
        ExperimentConfig base;
        base.task = TaskKind::Povm;
        base.model = "pauli6";
        base.measurement = "pauli6";
        run_tomo(povm_opts, TaskKind::Povm, base);
    });

    TomoOptions duals_opts;
    bool with_maxlik = false;
    CLI::App* duals_cmd = app.add_subcommand(
        "duals", "compare dual frames on one state-tomography config");
    add_common_options(duals_cmd, duals_opts);
    duals_opts.o_povm = duals_cmd->add_option(
        "--povm", duals_opts.povm, "measurement: pauli6|covariant|file:PATH");
    duals_opts.o_ensemble = duals_cmd->add_option(
        "--ensemble", duals_opts.ensemble, "weight ensemble: default|skewed");
    duals_cmd->add_flag("--maxlik", with_maxlik,
                        "include the maximum-likelihood estimator");
    duals_cmd->callback([&] { run_duals(duals_opts, with_maxlik); });

    std::string tester_kind = "qops";
    int tester_d = 2;
    bool tester_json = false;
    CLI::App* tester_cmd = app.add_subcommand(
        "optimal-tester", "closed-form optimal tomographic setup");
    tester_cmd->add_option("--kind", tester_kind, "target family")
        ->check(CLI::IsMember(
            {"qops", "channels", "unital", "states", "povms"}));
    tester_cmd->add_option("--d", tester_d, "Hilbert space dimension")
        ->check(CLI::PositiveNumber);
    tester_cmd->add_flag("--json", tester_json, "emit JSON");
    tester_cmd->callback(
        [&] { run_optimal_tester(tester_kind, tester_d, tester_json); });

    std::string comb_path, vtester_path, vpovm_path;
    bool validate_json = false;
    CLI::App* validate_cmd = app.add_subcommand(
        "validate", "check comb/tester/POVM JSON files against the axioms");
    validate_cmd->add_option("--comb", comb_path, "comb JSON file");
    validate_cmd->add_option("--tester", vtester_path, "tester JSON file");
    validate_cmd->add_option("--povm", vpovm_path, "POVM JSON file");
    validate_cmd->add_flag("--json", validate_json, "emit JSON");
    validate_cmd->callback([&] {
        if (comb_path.empty() && vtester_path.empty() && vpovm_path.empty())
            throw CLI::RequiredError("--comb, --tester or --povm");
        exit_code =
            run_validate(comb_path, vtester_path, vpovm_path, validate_json);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return exit_code;
}
