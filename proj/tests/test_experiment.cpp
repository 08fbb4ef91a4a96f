#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gt/analytic.hpp"
#include "gt/errors.hpp"
#include "gt/experiment.hpp"
#include "gt/metrics.hpp"
#include "gt/simulator.hpp"
#include "json.hpp"

using namespace gt;
using namespace gt::experiment;

namespace {

SweepConfig mini_config() {
    SweepConfig config;
    config.n = 120;
    config.p_start = 0.0;
    config.p_end = 0.02;
    config.p_step = 0.01;
    config.m_val = 10;
    config.presets = {Preset::SpTwo};
    config.base_seed = 99;
    return config;
}

SweepRecord pooled_row(double p, double etm, double atm, double exp_d, double avg_d) {
    SweepRecord rec;
    rec.preset = "sp-two";
    rec.n = 100;
    rec.p = p;
    rec.k = 1;
    rec.r_vec = {1};
    rec.s_vec = {5};
    rec.etm = etm;
    rec.ent = etm * 100.0;
    rec.atm = atm;
    rec.exp_duration_pm = exp_d;
    rec.avg_duration_pm = avg_d;
    rec.m_val = 10;
    return rec;
}

SweepRecord fallback_row(double p) {
    SweepRecord rec;
    rec.preset = "sp-two";
    rec.n = 100;
    rec.p = p;
    rec.k = 0;
    rec.etm = 1.0;
    rec.ent = 100.0;
    rec.atm = 1.0;
    rec.exp_duration_pm = 1.0;
    rec.avg_duration_pm = 1.0;
    rec.m_val = 10;
    return rec;
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const char* tag) {
        path = std::filesystem::temp_directory_path() /
               (std::string("gt_") + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("mini sweep produces consistent pooled rows") {
    const SweepConfig config = mini_config();
    const SweepOutput output = run_sweep(config);

    REQUIRE(output.presets == std::vector<std::string>{"sp-two"});
    const std::vector<SweepRecord>& rows = output.records.at("sp-two");
    REQUIRE(rows.size() == 3);
    CHECK(output.thresholds.at("sp-two") == doctest::Approx(0.35).epsilon(1e-12));

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SweepRecord& rec = rows[i];
        CHECK(rec.preset == "sp-two");
        CHECK(rec.n == 120);
        CHECK(rec.p == doctest::Approx(0.01 * (double)i).epsilon(1e-12));
        CHECK(rec.m_val == 10);
        REQUIRE(rec.k == 1);
        REQUIRE(rec.r_vec.size() == 1);
        REQUIRE(rec.s_vec.size() == 1);

        // Closed-form columns must recompute from the stored plan.
        Plan plan;
        plan.stages.push_back(Stage{rec.r_vec[0], rec.s_vec[0]});
        const PopulationModel model(rec.n, rec.p);
        CHECK(rec.etm == doctest::Approx(analytic::etm(plan, model)).epsilon(1e-12));
        CHECK(rec.ent == doctest::Approx(rec.etm * rec.n).epsilon(1e-12));
        CHECK(rec.rate == doctest::Approx(analytic::rate(plan, model)).epsilon(1e-12));
        CHECK(rec.range == rec.t_max - rec.t_min);
        CHECK(rec.t_min <= rec.t_max);
        CHECK(rec.atm * rec.n >= (double)rec.t_min - 1e-9);
        CHECK(rec.atm * rec.n <= (double)rec.t_max + 1e-9);
    }

    // A clean population pools everyone into one full-width group.
    CHECK(rows[0].s_vec[0] == 120);
    CHECK(rows[0].atm == doctest::Approx(1.0 / 120.0).epsilon(1e-12));

    // The simulated batch is keyed by (seed, preset, grid index) only, so
    // a parallel run returns byte-identical output.
    SweepConfig parallel = mini_config();
    parallel.workers = 2;
    const SweepOutput par = run_sweep(parallel);
    CHECK(sweep_records_to_csv(par.records.at("sp-two")) ==
          sweep_records_to_csv(rows));
}

TEST_CASE("sweep CSV round-trips") {
    const SweepOutput output = run_sweep(mini_config());
    const std::vector<SweepRecord>& rows = output.records.at("sp-two");
    const std::string csv = sweep_records_to_csv(rows);
    const std::vector<SweepRecord> parsed = parse_sweep_csv(csv);

    REQUIRE(parsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(parsed[i].preset == rows[i].preset);
        CHECK(parsed[i].n == rows[i].n);
        CHECK(parsed[i].k == rows[i].k);
        CHECK(parsed[i].r_vec == rows[i].r_vec);
        CHECK(parsed[i].s_vec == rows[i].s_vec);
        CHECK(parsed[i].t_min == rows[i].t_min);
        CHECK(parsed[i].t_max == rows[i].t_max);
        CHECK(parsed[i].range == rows[i].range);
        CHECK(parsed[i].m_val == rows[i].m_val);
        CHECK(parsed[i].seed == rows[i].seed);
        CHECK(parsed[i].p == doctest::Approx(rows[i].p).epsilon(1e-8));
        CHECK(parsed[i].etm == doctest::Approx(rows[i].etm).epsilon(1e-8));
        CHECK(parsed[i].atm == doctest::Approx(rows[i].atm).epsilon(1e-8));
    }
    // Nine significant digits survive one parse/render cycle unchanged.
    CHECK(sweep_records_to_csv(parsed) == csv);

    // Rows that fell back to individual testing carry empty stage vectors.
    const std::vector<SweepRecord> fallback = {fallback_row(0.3)};
    const std::vector<SweepRecord> fb = parse_sweep_csv(sweep_records_to_csv(fallback));
    REQUIRE(fb.size() == 1);
    CHECK(fb[0].k == 0);
    CHECK(fb[0].r_vec.empty());
    CHECK(fb[0].s_vec.empty());

    // Derived seeds span the whole unsigned 64-bit range.
    SweepRecord big = fallback_row(0.3);
    big.seed = 18446744073709551615ull;
    const std::vector<SweepRecord> big_rt = parse_sweep_csv(sweep_records_to_csv({big}));
    REQUIRE(big_rt.size() == 1);
    CHECK(big_rt[0].seed == 18446744073709551615ull);
    CHECK_THROWS_AS(
        parse_sweep_csv(std::string(kSweepHeader) +
                        "\nindividual,100,0.3,0,,,1,100,1,100,100,0,0.881290899,1,1,10,-7\n"),
        SchemaMismatch);
}

TEST_CASE("sweep CSV schema errors") {
    CHECK_THROWS_AS(parse_sweep_csv(""), SchemaMismatch);
    CHECK_THROWS_AS(parse_sweep_csv("nope\n"), SchemaMismatch);

    const std::string header(kSweepHeader);
    CHECK_THROWS_AS(parse_sweep_csv(header + "\nsp-two,100\n"), SchemaMismatch);
    CHECK_THROWS_AS(
        parse_sweep_csv(header +
                        "\nsp-two,100,abc,1,1,5,0.2,20,0.2,18,22,4,0.4,1.1,1.1,10,7\n"),
        SchemaMismatch);
    // k = 2 but only one stage in the vectors.
    CHECK_THROWS_AS(
        parse_sweep_csv(header +
                        "\nsp-two,100,0.01,2,1,5,0.2,20,0.2,18,22,4,0.4,1.1,1.1,10,7\n"),
        SchemaMismatch);
}

TEST_CASE("error tables split by interval and skip absent ranges") {
    std::vector<SweepRecord> records;
    records.push_back(pooled_row(0.01, 0.2, 0.21, 1.10, 1.10));   // low, 5% off
    records.push_back(pooled_row(0.1, 0.5, 0.5, 1.20, 1.26));     // mid, exact / 5% off
    records.push_back(fallback_row(0.3));                         // high, not counted

    SweepRecord ind = fallback_row(0.02);
    ind.preset = "individual";
    records.push_back(ind);

    const MapeTable tests = mape_tests_table(records);
    REQUIRE(tests.presets == std::vector<std::string>{"individual", "sp-two"});
    REQUIRE(tests.ns == std::vector<int>{100});
    const auto& cells = tests.cells.at("sp-two").at(100);
    REQUIRE(cells[0].present);
    CHECK(cells[0].value == doctest::Approx(5.0).epsilon(1e-12));
    REQUIRE(cells[1].present);
    CHECK(cells[1].value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_FALSE(cells[2].present);  // only a fallback row lives there

    const auto& ind_cells = tests.cells.at("individual").at(100);
    REQUIRE(ind_cells[0].present);
    CHECK(ind_cells[0].value == 0.0);
    CHECK_FALSE(ind_cells[1].present);

    const MapeTable durations = mape_duration_table(records);
    const auto& dur_cells = durations.cells.at("sp-two").at(100);
    CHECK(dur_cells[0].value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(dur_cells[1].value == doctest::Approx(5.0).epsilon(1e-12));

    const std::string csv = mape_table_to_csv(tests);
    CHECK(csv.find("preset,p_low_n100,p_mid_n100,p_high_n100\n") == 0);
    CHECK(csv.find("sp-two,5,0,-\n") != std::string::npos);
}

TEST_CASE("rate curves keep only the low interval") {
    std::vector<SweepRecord> records;
    records.push_back(pooled_row(0.01, 0.2, 0.2, 1.0, 1.0));
    records.push_back(pooled_row(0.077, 0.4, 0.4, 1.0, 1.0));
    records.push_back(pooled_row(0.1, 0.5, 0.5, 1.0, 1.0));
    records[0].rate = 0.4;
    records[1].rate = 0.9;
    records[2].rate = 0.95;

    const std::string csv = rate_curves_to_csv(records);
    CHECK(csv.find("preset,n,p,rate\n") == 0);
    CHECK(csv.find("sp-two,100,0.01,0.4\n") != std::string::npos);
    CHECK(csv.find("sp-two,100,0.077,0.9\n") != std::string::npos);
    CHECK(csv.find("0.95") == std::string::npos);
}

TEST_CASE("sweep outputs and report land on disk") {
    const TempDir dir("sweep_out");
    const SweepConfig config = mini_config();
    const SweepOutput output = run_sweep(config);
    const std::vector<std::string> written =
        write_sweep_outputs(output, config, dir.path.string());

    REQUIRE(written.size() == 2);
    CHECK(std::filesystem::exists(written[0]));
    CHECK(written[0].find("sweep_sp-two_120.csv") != std::string::npos);
    CHECK(written[1].find("sweep_meta.json") != std::string::npos);

    const std::vector<SweepRecord> back = read_sweep_csv(written[0]);
    CHECK(back.size() == 3);

    std::ifstream meta_in(written[1]);
    nlohmann::json meta;
    meta_in >> meta;
    CHECK(meta["version"] == kVersion);
    CHECK(meta["prng"] == "splitmix64+lemire+fisher-yates");
    CHECK(meta["base_seed"] == 99);
    CHECK(meta["weights"] == "unit");
    CHECK(meta["thresholds"]["sp-two"].get<double>() == doctest::Approx(0.35));

    const std::vector<std::string> report =
        write_report({written[0]}, (dir.path / "report").string());
    REQUIRE(report.size() == 3);
    for (const std::string& path : report) CHECK(std::filesystem::exists(path));

    std::ifstream tests_in(report[0]);
    std::string header;
    std::getline(tests_in, header);
    CHECK(header == "preset,p_low_n120,p_mid_n120,p_high_n120");

    CHECK_THROWS_AS(read_sweep_csv((dir.path / "missing.csv").string()), Error);
}

TEST_CASE("fixture documents load and drive the protocol") {
    const TempDir dir("fixture");
    const std::string path = (dir.path / "fx.json").string();
    {
        std::ofstream out(path);
        out << R"({
            "n": 6,
            "defectives": [1, 4],
            "plan": {"stages": [{"r": 1, "s": 3}]},
            "stages": [{"rounds": [[1, 2, 3, 4, 5, 6]]}]
        })";
    }
    const Fixture fx = load_fixture(path);
    CHECK(fx.n == 6);
    CHECK(fx.defectives == std::vector<int>{0, 3});
    REQUIRE(fx.plan.has_value());
    CHECK(fx.plan->k() == 1);
    REQUIRE(fx.assignments.size() == 1);
    CHECK(fx.assignments[0].rounds[0] == std::vector<int>{0, 1, 2, 3, 4, 5});

    const sim::TrialOutcome out = sim::run_trial_with_assignment(
        *fx.plan, sim::population_from_defectives(fx.n, fx.defectives), fx.assignments,
        {1.0, 1.0});
    // Both triples hold a defective, so everyone is retested.
    CHECK(out.total_tests == 8);

    CHECK_THROWS_AS(parse_fixture_json("not json"), SchemaMismatch);
    CHECK_THROWS_AS(parse_fixture_json(R"({"defectives": []})"), SchemaMismatch);
    CHECK_THROWS_AS(parse_fixture_json(R"({"n": 6, "defectives": [0]})"), SchemaMismatch);
    CHECK_THROWS_AS(parse_fixture_json(R"({"n": 6, "defectives": [7]})"), SchemaMismatch);
    CHECK_THROWS_AS(
        parse_fixture_json(R"({"n": 6, "defectives": [], "stages": [{"rounds": [[9]]}]})"),
        SchemaMismatch);
}

TEST_CASE("config documents load with defaults") {
    const SweepConfig defaults = parse_config_json("{}");
    CHECK(defaults.n == 1000);
    CHECK(defaults.p_end == doctest::Approx(0.35));
    CHECK(defaults.p_step == doctest::Approx(0.001));
    CHECK(defaults.m_val == 100);
    CHECK(defaults.presets.empty());
    CHECK(defaults.weights.empty());
    CHECK(defaults.out_dir == "out");

    const SweepConfig full = parse_config_json(R"({
        "n": 250,
        "p_start": 0.01,
        "p_end": 0.1,
        "p_step": 0.005,
        "m_val": 20,
        "s_max": 64,
        "r_max": 4,
        "workers": 3,
        "base_seed": 777,
        "eval_budget": 5000000,
        "presets": ["sp-two", "rp-two"],
        "weights": [1.0, 2.0, 0.5],
        "out_dir": "elsewhere"
    })");
    CHECK(full.n == 250);
    CHECK(full.p_start == doctest::Approx(0.01));
    CHECK(full.p_step == doctest::Approx(0.005));
    CHECK(full.m_val == 20);
    CHECK(full.s_max == 64);
    CHECK(full.r_max == 4);
    CHECK(full.workers == 3);
    CHECK(full.base_seed == 777);
    CHECK(full.eval_budget == 5000000);
    REQUIRE(full.presets.size() == 2);
    CHECK(full.presets[0] == Preset::SpTwo);
    CHECK(full.presets[1] == Preset::RpTwo);
    CHECK(full.weights == std::vector<double>{1.0, 2.0, 0.5});
    CHECK(full.out_dir == "elsewhere");

    CHECK_THROWS_AS(parse_config_json("[1, 2]"), SchemaMismatch);
    CHECK_THROWS_AS(parse_config_json(R"({"n": "many"})"), SchemaMismatch);
    CHECK_THROWS_AS(parse_config_json(R"({"presets": ["sp-five"]})"), ValidationError);
    CHECK_THROWS_AS(parse_config_json(R"({"weights": ["heavy"]})"), SchemaMismatch);
}

TEST_CASE("sweep config validation") {
    SweepConfig config = mini_config();
    config.p_step = 0.0;
    CHECK_THROWS_AS(run_sweep(config), ValidationError);
    config = mini_config();
    config.p_start = 0.5;
    config.p_end = 0.1;
    CHECK_THROWS_AS(run_sweep(config), ValidationError);
    config = mini_config();
    config.n = 0;
    CHECK_THROWS_AS(run_sweep(config), ValidationError);
    config = mini_config();
    config.m_val = 0;
    CHECK_THROWS_AS(run_sweep(config), ValidationError);
}
