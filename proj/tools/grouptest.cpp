#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gt/analytic.hpp"
#include "gt/design.hpp"
#include "gt/errors.hpp"
#include "gt/experiment.hpp"
#include "gt/metrics.hpp"
#include "gt/optimizer.hpp"
#include "gt/rng.hpp"
#include "gt/simulator.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitBudgetOrIo = 3;

std::string fmt(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

std::vector<double> parse_weights(const std::string& text) {
    std::vector<double> weights;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        try {
            std::size_t used = 0;
            weights.push_back(std::stod(token, &used));
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw gt::ValidationError("bad weight \"" + token + "\"");
        }
    }
    return weights;
}

struct EvaluateArgs {
    std::string preset;
    std::string plan_text;
    int n = 0;
    double p = 0.0;
    std::string weights_text;
    int r_value = 0;
    int s_max = 0;
    int r_max = 10;
    std::uint64_t budget = 100000000ull;
};

void print_plan_metrics(const gt::Plan& plan, const gt::PopulationModel& model,
                        const std::vector<double>& weights) {
    std::cout << "plan: " << gt::plan_shorthand(plan) << '\n';
    std::cout << "k: " << plan.k() << '\n';
    std::cout << "etm: " << fmt(gt::analytic::etm(plan, model)) << '\n';
    std::cout << "expected_tests: " << fmt(gt::analytic::expected_tests(plan, model)) << '\n';
    const double duration = gt::analytic::expected_duration(plan, model, weights);
    std::cout << "expected_duration: " << fmt(duration) << '\n';
    std::cout << "expected_duration_pm: " << fmt(duration / model.n) << '\n';
    std::cout << "rate: " << fmt(gt::analytic::rate(plan, model)) << '\n';
    std::cout << "entropy: " << fmt(gt::analytic::binary_entropy(model.p)) << '\n';
    std::cout << "counting_bound: " << fmt(gt::analytic::counting_bound(model)) << '\n';
}

int cmd_evaluate(const EvaluateArgs& args) {
    const gt::PopulationModel model(args.n, args.p);
    if (!args.plan_text.empty()) {
        const gt::Plan plan = gt::parse_plan_shorthand(args.plan_text);
        gt::validate_plan(plan, args.n);
        const std::vector<double> weights = args.weights_text.empty()
                                                ? gt::analytic::unit_weights(plan.k())
                                                : parse_weights(args.weights_text);
        std::cout << "preset: custom\n";
        print_plan_metrics(plan, model, weights);
        return 0;
    }

    const gt::Preset preset = gt::parse_preset(args.preset);
    std::cout << "preset: " << gt::preset_name(preset) << '\n';
    if (preset == gt::Preset::Individual) {
        std::cout << "plan: individual\n";
        std::cout << "k: 0\n";
        std::cout << "etm: 1\n";
        std::cout << "expected_tests: " << fmt(static_cast<double>(args.n)) << '\n';
        const std::vector<double> weights = args.weights_text.empty()
                                                ? gt::analytic::unit_weights(0)
                                                : parse_weights(args.weights_text);
        if (weights.size() != 1) throw gt::WeightArityMismatch(weights.size(), 1);
        std::cout << "expected_duration: " << fmt(weights[0] * args.n) << '\n';
        std::cout << "expected_duration_pm: " << fmt(weights[0]) << '\n';
        std::cout << "rate: " << fmt(gt::analytic::binary_entropy(args.p)) << '\n';
        std::cout << "entropy: " << fmt(gt::analytic::binary_entropy(args.p)) << '\n';
        std::cout << "counting_bound: " << fmt(gt::analytic::counting_bound(model)) << '\n';
        return 0;
    }

    gt::opt::OptimizationSpec spec;
    spec.preset = preset;
    spec.s_max = args.s_max;
    spec.r_max = args.r_max;
    spec.eval_budget = args.budget;
    if (args.r_value > 0) {
        // Pin the joint-test counts instead of searching them.
        spec.use_preset = false;
        spec.k = gt::preset_stage_count(preset);
        spec.mode = gt::opt::RMode::FixedVector;
        spec.fixed_r = gt::preset_r_pattern(preset, args.r_value);
    }
    const gt::opt::OptimizationResult best = gt::opt::optimize(spec, model);
    std::cout << "feasible: " << (best.feasible ? "yes" : "no") << '\n';
    std::cout << "evaluations: " << best.evaluations << '\n';
    if (!best.feasible) {
        std::cout << "plan: individual\n";
        std::cout << "etm: 1\n";
        return 0;
    }
    const std::vector<double> weights = args.weights_text.empty()
                                            ? gt::analytic::unit_weights(best.plan->k())
                                            : parse_weights(args.weights_text);
    print_plan_metrics(*best.plan, model, weights);
    return 0;
}

struct SimulateArgs {
    std::string plan_text;
    int n = 0;
    double p = 0.0;
    std::uint64_t seed = 1;
    std::string weights_text;
    std::string fixture_path;
};

int cmd_simulate(const SimulateArgs& args) {
    std::optional<gt::Plan> plan;
    if (!args.plan_text.empty()) plan = gt::parse_plan_shorthand(args.plan_text);

    gt::sim::TrialOutcome outcome;
    int n = args.n;
    if (!args.fixture_path.empty()) {
        const gt::experiment::Fixture fx = gt::experiment::load_fixture(args.fixture_path);
        if (args.n > 0 && args.n != fx.n) {
            throw gt::ValidationError("--n disagrees with the fixture's population size");
        }
        n = fx.n;
        if (!plan) plan = fx.plan;
        if (!plan) throw gt::ValidationError("no plan given on the command line or in the fixture");
        const std::vector<double> weights = args.weights_text.empty()
                                                ? gt::analytic::unit_weights(plan->k())
                                                : parse_weights(args.weights_text);
        const gt::PopulationState pop = gt::sim::population_from_defectives(fx.n, fx.defectives);
        outcome = gt::sim::run_trial_with_assignment(*plan, pop, fx.assignments, weights);
        std::cout << "fixture: " << args.fixture_path << '\n';
    } else {
        if (!plan) throw gt::ValidationError("--plan is required without a fixture");
        if (n < 1) throw gt::ValidationError("--n is required without a fixture");
        const std::vector<double> weights = args.weights_text.empty()
                                                ? gt::analytic::unit_weights(plan->k())
                                                : parse_weights(args.weights_text);
        const gt::PopulationState pop =
            gt::sim::generate_population(n, args.p, gt::derive_stream(args.seed, 0));
        outcome = gt::sim::run_trial(*plan, pop, weights, gt::derive_stream(args.seed, 1));
        std::cout << "seed: " << args.seed << '\n';
    }

    std::cout << "plan: " << gt::plan_shorthand(*plan) << '\n';
    std::cout << "n: " << n << '\n';
    const int k = plan->k();
    std::vector<long long> entrants(static_cast<std::size_t>(k) + 1, 0);
    for (int e : outcome.exit_stage) {
        for (int l = 0; l < e; ++l) ++entrants[static_cast<std::size_t>(l)];
    }
    for (int l = 0; l <= k; ++l) {
        std::cout << "stage " << (l + 1) << (l == k ? " (individual)" : "") << ": tests "
                  << outcome.stage_tests[static_cast<std::size_t>(l)] << " entrants "
                  << entrants[static_cast<std::size_t>(l)] << '\n';
    }
    std::cout << "total_tests: " << outcome.total_tests << '\n';
    std::cout << "duration_total: " << fmt(outcome.duration_total) << '\n';
    std::cout << "identified_defectives:";
    for (int i : outcome.identified_defectives) std::cout << ' ' << (i + 1);
    std::cout << '\n';
    return 0;
}

struct SweepArgs {
    std::string config_path;
    std::string out_dir;
    int n = -1;
    double p_start = -1.0;
    double p_end = -1.0;
    double p_step = -1.0;
    int m_val = -1;
    std::string presets_text;
    long long base_seed = -1;
    int s_max = -1;
    int r_max = -1;
    int workers = -1;
};

int cmd_sweep(const SweepArgs& args) {
    gt::experiment::SweepConfig config;
    if (!args.config_path.empty()) config = gt::experiment::load_config(args.config_path);
    // Flags override whatever the config file set.
    if (args.n >= 0) config.n = args.n;
    if (args.p_start >= 0.0) config.p_start = args.p_start;
    if (args.p_end >= 0.0) config.p_end = args.p_end;
    if (args.p_step >= 0.0) config.p_step = args.p_step;
    if (args.m_val >= 0) config.m_val = args.m_val;
    if (args.base_seed >= 0) config.base_seed = static_cast<std::uint64_t>(args.base_seed);
    if (args.s_max >= 0) config.s_max = args.s_max;
    if (args.r_max >= 0) config.r_max = args.r_max;
    if (args.workers >= 0) config.workers = args.workers;
    if (!args.out_dir.empty()) config.out_dir = args.out_dir;
    if (!args.presets_text.empty()) {
        config.presets.clear();
        std::stringstream ss(args.presets_text);
        std::string token;
        while (std::getline(ss, token, ',')) {
            config.presets.push_back(gt::parse_preset(token));
        }
    }

    const gt::experiment::SweepOutput output = gt::experiment::run_sweep(config);
    const std::vector<std::string> written =
        gt::experiment::write_sweep_outputs(output, config, config.out_dir);
    for (const std::string& path : written) {
        // Stems look like sweep_<preset>_<n> (or sweep_meta for the JSON).
        const std::string stem = std::filesystem::path(path).stem().string();
        const std::size_t cut = stem.rfind('_');
        std::size_t rows = 0;
        if (cut != std::string::npos && cut > 6) {
            const auto it = output.records.find(stem.substr(6, cut - 6));
            if (it != output.records.end()) rows = it->second.size();
        }
        if (rows > 0) {
            std::cout << "wrote " << path << " (" << rows << " rows)\n";
        } else {
            std::cout << "wrote " << path << '\n';
        }
    }
    return 0;
}

struct ReportArgs {
    std::vector<std::string> inputs;
    std::string out_dir = "out";
};

int cmd_report(const ReportArgs& args) {
    std::vector<std::string> paths;
    for (const std::string& input : args.inputs) {
        if (std::filesystem::is_directory(input)) {
            std::vector<std::string> found;
            for (const auto& entry : std::filesystem::directory_iterator(input)) {
                const std::string name = entry.path().filename().string();
                if (name.rfind("sweep_", 0) == 0 && entry.path().extension() == ".csv") {
                    found.push_back(entry.path().string());
                }
            }
            std::sort(found.begin(), found.end());
            paths.insert(paths.end(), found.begin(), found.end());
        } else {
            paths.push_back(input);
        }
    }
    if (paths.empty()) throw gt::Error("no sweep CSVs found under the given inputs");
    const std::vector<std::string> written = gt::experiment::write_report(paths, args.out_dir);
    for (const std::string& path : written) std::cout << "wrote " << path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-stage pooled-testing designs: closed forms, optimization, simulation"};
    app.require_subcommand(1);

    EvaluateArgs ev;
    CLI::App* evaluate = app.add_subcommand(
        "evaluate", "Evaluate a plan or optimize a preset at one (n, p) point");
    evaluate->add_option("--preset", ev.preset, "named design, e.g. sp-two");
    evaluate->add_option("--plan", ev.plan_text, "explicit stages as RxS tokens, e.g. 2x5,1x3");
    evaluate->add_option("--n", ev.n, "population size")->required();
    evaluate->add_option("--p", ev.p, "defect probability")->required();
    evaluate->add_option("--weights", ev.weights_text, "per-stage time units, comma separated");
    evaluate->add_option("--r", ev.r_value, "joint tests for rp-two instead of searching");
    evaluate->add_option("--s-max", ev.s_max, "group-size bound (0 = derive from n and p)");
    evaluate->add_option("--r-max", ev.r_max, "joint-test bound for rp-two");
    evaluate->add_option("--budget", ev.budget, "optimizer evaluation cap");

    SimulateArgs sm;
    CLI::App* simulate =
        app.add_subcommand("simulate", "Run the protocol once and print the outcome");
    simulate->add_option("--plan", sm.plan_text, "stages as RxS tokens");
    simulate->add_option("--n", sm.n, "population size");
    simulate->add_option("--p", sm.p, "defect probability");
    simulate->add_option("--seed", sm.seed, "trial seed");
    simulate->add_option("--weights", sm.weights_text, "per-stage time units");
    simulate->add_option("--fixture", sm.fixture_path,
                         "JSON fixture with defectives and per-stage permutations");

    SweepArgs sw;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Optimize, evaluate and simulate presets over a probability grid");
    sweep->add_option("--config", sw.config_path, "JSON config file");
    sweep->add_option("--out", sw.out_dir, "output directory");
    sweep->add_option("--n", sw.n, "population size");
    sweep->add_option("--p-start", sw.p_start, "grid start");
    sweep->add_option("--p-end", sw.p_end, "grid end");
    sweep->add_option("--p-step", sw.p_step, "grid step");
    sweep->add_option("--m-val", sw.m_val, "trials per cell");
    sweep->add_option("--presets", sw.presets_text, "comma-separated preset names");
    sweep->add_option("--seed", sw.base_seed, "base seed");
    sweep->add_option("--s-max", sw.s_max, "group-size bound (0 = derive)");
    sweep->add_option("--r-max", sw.r_max, "joint-test bound for rp-two");
    sweep->add_option("--workers", sw.workers, "parallel workers over grid cells");

    ReportArgs rp;
    CLI::App* report = app.add_subcommand(
        "report", "Summarize sweep CSVs into error tables and rate curves");
    report->add_option("--in", rp.inputs, "sweep CSV files or directories holding them")
        ->required();
    report->add_option("--out", rp.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (evaluate->parsed()) {
            if (ev.preset.empty() == ev.plan_text.empty()) {
                throw gt::ValidationError("give exactly one of --preset or --plan");
            }
            return cmd_evaluate(ev);
        }
        if (simulate->parsed()) return cmd_simulate(sm);
        if (sweep->parsed()) return cmd_sweep(sw);
        if (report->parsed()) return cmd_report(rp);
    } catch (const gt::BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBudgetOrIo;
    } catch (const gt::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const gt::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const gt::AssignmentMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const gt::SchemaMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const gt::Error& e) {
        // Remaining library errors are IO-shaped (unreadable/unwritable files).
        std::cerr << "error: " << e.what() << '\n';
        return kExitBudgetOrIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBudgetOrIo;
    }
    return 0;
}
