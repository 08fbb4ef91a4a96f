#ifndef GT_EXPERIMENT_HPP
#define GT_EXPERIMENT_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gt/design.hpp"
#include "gt/simulator.hpp"

namespace gt {
namespace experiment {

inline constexpr const char* kVersion = "0.1.0";

/**
 * Everything a sweep needs. The probability grid is p_start, p_start +
 * p_step, ... up to p_end inclusive. weights, when non-empty, supplies
 * per-stage time units; each preset with k pooling stages uses the first
 * k+1 entries, so one list can serve presets of mixed depth. Empty means
 * one unit per stage.
 */
struct SweepConfig {
    int n = 1000;
    double p_start = 0.0;
    double p_end = 0.35;
    double p_step = 0.001;
    int m_val = 100;
    std::vector<Preset> presets;  // empty = all presets
    std::uint64_t base_seed = 424243;
    std::vector<double> weights;
    int s_max = 0;  // 0 = derive from (n, p)
    int r_max = 10;
    std::uint64_t eval_budget = 100000000ull;
    int workers = 1;
    std::string out_dir = "out";
};

/**
 * One sweep cell. Cells where the preset's pooling is infeasible fall back
 * to individual testing: k = 0, empty stage vectors, etm = 1. ent is the
 * expected total number of tests (etm * n); the duration columns are per
 * member.
 */
struct SweepRecord {
    std::string preset;
    int n = 0;
    double p = 0.0;
    int k = 0;
    std::vector<int> r_vec;
    std::vector<int> s_vec;
    double etm = 1.0;
    double ent = 0.0;
    double atm = 1.0;
    long long t_min = 0;
    long long t_max = 0;
    long long range = 0;
    double rate = 0.0;
    double exp_duration_pm = 0.0;
    double avg_duration_pm = 0.0;
    int m_val = 0;
    std::uint64_t seed = 0;
};

/// Records per preset (keyed by preset name, in all_presets order when
/// iterated through the presets field) plus the thresholds that bounded
/// each preset's pooled range.
struct SweepOutput {
    std::vector<std::string> presets;
    std::map<std::string, std::vector<SweepRecord>> records;
    std::map<std::string, double> thresholds;
};

/**
 * Runs the full grid for every configured preset. Each cell optimizes the
 * preset at that probability, evaluates the closed forms, then simulates
 * m_val trials with a seed derived from (base_seed, preset, grid index).
 * Cells beyond the preset's feasibility threshold, and cells where no
 * pooled plan beats one test per member, are simulated as individual
 * testing instead. Deterministic for any worker count.
 */
SweepOutput run_sweep(const SweepConfig& config);

/// The fixed sweep CSV column order.
extern const char* const kSweepHeader;

/// Writes sweep_<preset>_<n>.csv per preset plus sweep_meta.json into
/// out_dir (created if missing). Returns the paths written.
std::vector<std::string> write_sweep_outputs(const SweepOutput& output,
                                             const SweepConfig& config,
                                             const std::string& out_dir);

/// Serializes records in the kSweepHeader column order, floats at nine
/// significant digits.
std::string sweep_records_to_csv(const std::vector<SweepRecord>& records);

/// Parses a sweep CSV; throws SchemaMismatch on header or field problems.
std::vector<SweepRecord> parse_sweep_csv(const std::string& text);

/// Reads and parses one sweep CSV file.
std::vector<SweepRecord> read_sweep_csv(const std::string& path);

/// One table cell: either a percentage or absent (rendered "-").
struct MapeCell {
    bool present = false;
    double value = 0.0;
};

/**
 * Accuracy summary in the reporting layout: one row per preset, one cell
 * per (population size, interval). Pooled rows enter an interval's error
 * only where the sweep actually produced a pooled plan, so intervals a
 * preset never reaches stay absent.
 */
struct MapeTable {
    std::vector<std::string> presets;
    std::vector<int> ns;
    // cells[preset][n] = {low, mid, high}
    std::map<std::string, std::map<int, std::array<MapeCell, 3>>> cells;
};

/// Per-interval error of observed vs expected tests per member.
MapeTable mape_tests_table(const std::vector<SweepRecord>& records);

/// Same layout for the per-member duration columns.
MapeTable mape_duration_table(const std::vector<SweepRecord>& records);

/// Renders a table as CSV with "-" for absent cells.
std::string mape_table_to_csv(const MapeTable& table);

/// Rate column of every record in the low interval (p <= 0.077), long
/// format: preset,n,p,rate.
std::string rate_curves_to_csv(const std::vector<SweepRecord>& records);

/**
 * Reads sweep CSVs and writes mape_tests.csv, mape_duration.csv and
 * rate_curves.csv into out_dir. Returns the paths written.
 */
std::vector<std::string> write_report(const std::vector<std::string>& sweep_csv_paths,
                                      const std::string& out_dir);

/// A prescribed scenario: ground truth plus the exact permutations each
/// stage should use. Loaded from JSON with 1-based member ids.
struct Fixture {
    int n = 0;
    std::vector<int> defectives;  // 0-based after loading
    std::optional<Plan> plan;
    std::vector<sim::StageAssignment> assignments;
};

/// Parses a fixture document; throws SchemaMismatch on malformed input.
Fixture parse_fixture_json(const std::string& text);

/// Reads and parses a fixture file.
Fixture load_fixture(const std::string& path);

/// Parses a sweep config document; missing keys keep their defaults.
SweepConfig parse_config_json(const std::string& text);

/// Reads and parses a config file.
SweepConfig load_config(const std::string& path);

}  // namespace experiment
}  // namespace gt

#endif  // GT_EXPERIMENT_HPP
