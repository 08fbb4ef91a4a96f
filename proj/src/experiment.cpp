#include "gt/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "gt/analytic.hpp"
#include "gt/errors.hpp"
#include "gt/metrics.hpp"
#include "gt/optimizer.hpp"
#include "gt/rng.hpp"
#include "json.hpp"

namespace gt {
namespace experiment {

const char* const kSweepHeader =
    "preset,n,p,k,r_vec,s_vec,etm,ent,atm,t_min,t_max,range,rate,"
    "exp_duration_pm,avg_duration_pm,m_val,seed";

namespace {

// Nine significant digits, locale-independent. Shared by every float
// column so identical runs produce byte-identical files.
std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

std::string join_ints(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ';';
        out += std::to_string(values[i]);
    }
    return out;
}

std::vector<int> split_ints(const std::string& text) {
    std::vector<int> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ';')) {
        try {
            out.push_back(std::stoi(token));
        } catch (const std::exception&) {
            throw SchemaMismatch("bad integer list entry \"" + token + "\"");
        }
    }
    return out;
}

std::vector<double> grid_points(const SweepConfig& config) {
    std::vector<double> grid;
    const long count =
        static_cast<long>(std::floor((config.p_end - config.p_start) / config.p_step + 1e-9)) + 1;
    grid.reserve(static_cast<std::size_t>(std::max(count, 0L)));
    for (long i = 0; i < count; ++i) {
        grid.push_back(config.p_start + static_cast<double>(i) * config.p_step);
    }
    return grid;
}

std::vector<double> weights_for(const SweepConfig& config, int k) {
    const std::size_t want = static_cast<std::size_t>(k) + 1;
    if (config.weights.empty()) return analytic::unit_weights(k);
    if (config.weights.size() < want) {
        throw WeightArityMismatch(config.weights.size(), want);
    }
    return std::vector<double>(config.weights.begin(),
                               config.weights.begin() + static_cast<long>(want));
}

SweepRecord individual_cell(const SweepConfig& config, double p, const std::string& preset,
                            std::uint64_t cell_seed) {
    SweepRecord rec;
    rec.preset = preset;
    rec.n = config.n;
    rec.p = p;
    rec.m_val = config.m_val;
    rec.seed = cell_seed;
    const std::vector<double> w = weights_for(config, 0);
    const std::vector<sim::TrialOutcome> outcomes =
        sim::replicate_individual(config.n, p, w, config.m_val, cell_seed);
    rec.etm = 1.0;
    rec.ent = static_cast<double>(config.n);
    rec.atm = metrics::atm(outcomes, config.n);
    rec.t_min = metrics::min_tests(outcomes);
    rec.t_max = metrics::max_tests(outcomes);
    rec.range = rec.t_max - rec.t_min;
    rec.rate = analytic::binary_entropy(p);
    rec.exp_duration_pm = w[0];
    rec.avg_duration_pm = metrics::avg_duration_per_member(outcomes, config.n);
    return rec;
}

SweepRecord pooled_cell(const SweepConfig& config, double p, Preset preset, double threshold,
                        std::uint64_t cell_seed) {
    const std::string name = preset_name(preset);
    if (p > threshold + 1e-12) return individual_cell(config, p, name, cell_seed);

    const PopulationModel model(config.n, p);
    opt::OptimizationSpec spec;
    spec.preset = preset;
    spec.s_max = config.s_max;
    spec.r_max = config.r_max;
    spec.eval_budget = config.eval_budget;
    const opt::OptimizationResult best = opt::optimize(spec, model);
    if (!best.feasible) return individual_cell(config, p, name, cell_seed);

    const Plan& plan = *best.plan;
    SweepRecord rec;
    rec.preset = name;
    rec.n = config.n;
    rec.p = p;
    rec.k = plan.k();
    for (const Stage& st : plan.stages) {
        rec.r_vec.push_back(st.r);
        rec.s_vec.push_back(st.s);
    }
    rec.m_val = config.m_val;
    rec.seed = cell_seed;

    const std::vector<double> w = weights_for(config, plan.k());
    rec.etm = best.etm_value;
    rec.ent = analytic::expected_tests(plan, model);
    rec.rate = analytic::rate(plan, model);
    rec.exp_duration_pm = analytic::expected_duration(plan, model, w) / config.n;

    const std::vector<sim::TrialOutcome> outcomes =
        sim::replicate(plan, config.n, p, w, config.m_val, cell_seed);
    rec.atm = metrics::atm(outcomes, config.n);
    rec.t_min = metrics::min_tests(outcomes);
    rec.t_max = metrics::max_tests(outcomes);
    rec.range = rec.t_max - rec.t_min;
    rec.avg_duration_pm = metrics::avg_duration_per_member(outcomes, config.n);
    return rec;
}

}  // namespace

SweepOutput run_sweep(const SweepConfig& config) {
    if (!(config.p_step > 0.0)) throw ValidationError("p_step must be positive");
    if (config.p_start > config.p_end) throw ValidationError("p_start must not exceed p_end");
    if (!(config.p_start >= 0.0 && config.p_end <= 1.0)) {
        throw ValidationError("probability grid must stay inside [0, 1]");
    }
    if (config.n < 1) throw ValidationError("population size must be positive");
    if (config.m_val < 1) throw ValidationError("m_val must be positive");

    const std::vector<Preset> presets =
        config.presets.empty() ? all_presets() : config.presets;
    if (presets.empty()) throw ValidationError("sweep needs at least one preset");
    const std::vector<double> grid = grid_points(config);

    SweepOutput output;
    for (Preset preset : presets) {
        const std::string name = preset_name(preset);
        output.presets.push_back(name);

        double threshold = 0.0;
        if (preset != Preset::Individual) {
            opt::OptimizationSpec spec;
            spec.preset = preset;
            spec.r_max = config.r_max;
            threshold = opt::feasibility_threshold(preset, spec, config.p_step,
                                                   std::max(config.p_end, 0.35));
        }
        output.thresholds[name] = threshold;

        // The preset ordinal keys the seed stream so a cell's trials only
        // depend on (base_seed, preset, grid index), never on which other
        // presets or workers run alongside.
        std::uint64_t ordinal = 0;
        for (std::size_t i = 0; i < all_presets().size(); ++i) {
            if (all_presets()[i] == preset) ordinal = static_cast<std::uint64_t>(i);
        }
        const std::uint64_t preset_stream = derive_stream(config.base_seed, ordinal);

        std::vector<SweepRecord> rows(grid.size());
        auto run_cell = [&](std::size_t idx) {
            const double p = grid[idx];
            const std::uint64_t cell_seed =
                derive_stream(preset_stream, static_cast<std::uint64_t>(idx));
            if (preset == Preset::Individual) {
                rows[idx] = individual_cell(config, p, name, cell_seed);
            } else {
                rows[idx] = pooled_cell(config, p, preset, threshold, cell_seed);
            }
        };
        if (config.workers <= 1) {
            for (std::size_t idx = 0; idx < grid.size(); ++idx) run_cell(idx);
        } else {
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> failures(static_cast<std::size_t>(config.workers));
            pool.reserve(static_cast<std::size_t>(config.workers));
            for (int w = 0; w < config.workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t idx = static_cast<std::size_t>(w); idx < grid.size();
                             idx += static_cast<std::size_t>(config.workers)) {
                            run_cell(idx);
                        }
                    } catch (...) {
                        failures[static_cast<std::size_t>(w)] = std::current_exception();
                    }
                });
            }
            for (std::thread& t : pool) t.join();
            for (const std::exception_ptr& failure : failures) {
                if (failure) std::rethrow_exception(failure);
            }
        }
        output.records[name] = std::move(rows);
    }
    return output;
}

std::string sweep_records_to_csv(const std::vector<SweepRecord>& records) {
    std::string out = kSweepHeader;
    out += '\n';
    for (const SweepRecord& rec : records) {
        out += rec.preset;
        out += ',' + std::to_string(rec.n);
        out += ',' + format_double(rec.p);
        out += ',' + std::to_string(rec.k);
        out += ',' + join_ints(rec.r_vec);
        out += ',' + join_ints(rec.s_vec);
        out += ',' + format_double(rec.etm);
        out += ',' + format_double(rec.ent);
        out += ',' + format_double(rec.atm);
        out += ',' + std::to_string(rec.t_min);
        out += ',' + std::to_string(rec.t_max);
        out += ',' + std::to_string(rec.range);
        out += ',' + format_double(rec.rate);
        out += ',' + format_double(rec.exp_duration_pm);
        out += ',' + format_double(rec.avg_duration_pm);
        out += ',' + std::to_string(rec.m_val);
        out += ',' + std::to_string(rec.seed);
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double_field(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw SchemaMismatch(std::string("bad ") + what + " value \"" + text + "\"");
    }
}

long long parse_ll_field(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        const long long value = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw SchemaMismatch(std::string("bad ") + what + " value \"" + text + "\"");
    }
}

// Seeds use the full unsigned 64-bit range, which stoll rejects.
std::uint64_t parse_u64_field(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        if (!text.empty() && text[0] == '-') throw std::invalid_argument(text);
        const unsigned long long value = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return static_cast<std::uint64_t>(value);
    } catch (const std::exception&) {
        throw SchemaMismatch(std::string("bad ") + what + " value \"" + text + "\"");
    }
}

}  // namespace

std::vector<SweepRecord> parse_sweep_csv(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line)) throw SchemaMismatch("sweep CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kSweepHeader) {
        throw SchemaMismatch("sweep CSV header does not match \"" + std::string(kSweepHeader) +
                             "\"");
    }
    std::vector<SweepRecord> records;
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> f = split_fields(line);
        if (f.size() != 17) {
            throw SchemaMismatch("sweep CSV row has " + std::to_string(f.size()) +
                                 " fields, expected 17");
        }
        SweepRecord rec;
        rec.preset = f[0];
        rec.n = static_cast<int>(parse_ll_field(f[1], "n"));
        rec.p = parse_double_field(f[2], "p");
        rec.k = static_cast<int>(parse_ll_field(f[3], "k"));
        rec.r_vec = split_ints(f[4]);
        rec.s_vec = split_ints(f[5]);
        rec.etm = parse_double_field(f[6], "etm");
        rec.ent = parse_double_field(f[7], "ent");
        rec.atm = parse_double_field(f[8], "atm");
        rec.t_min = parse_ll_field(f[9], "t_min");
        rec.t_max = parse_ll_field(f[10], "t_max");
        rec.range = parse_ll_field(f[11], "range");
        rec.rate = parse_double_field(f[12], "rate");
        rec.exp_duration_pm = parse_double_field(f[13], "exp_duration_pm");
        rec.avg_duration_pm = parse_double_field(f[14], "avg_duration_pm");
        rec.m_val = static_cast<int>(parse_ll_field(f[15], "m_val"));
        rec.seed = parse_u64_field(f[16], "seed");
        if (rec.r_vec.size() != rec.s_vec.size() ||
            rec.k != static_cast<int>(rec.r_vec.size())) {
            throw SchemaMismatch("stage vectors disagree with k in a sweep CSV row");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<SweepRecord> read_sweep_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_sweep_csv(buffer.str());
}

std::vector<std::string> write_sweep_outputs(const SweepOutput& output,
                                             const SweepConfig& config,
                                             const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;
    for (const std::string& preset : output.presets) {
        const std::string path =
            out_dir + "/sweep_" + preset + "_" + std::to_string(config.n) + ".csv";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write " + path);
        out << sweep_records_to_csv(output.records.at(preset));
        written.push_back(path);
    }

    nlohmann::json meta;
    meta["version"] = kVersion;
    meta["prng"] = kPrngId;
    meta["base_seed"] = config.base_seed;
    meta["n"] = config.n;
    meta["p_start"] = config.p_start;
    meta["p_end"] = config.p_end;
    meta["p_step"] = config.p_step;
    meta["m_val"] = config.m_val;
    meta["presets"] = output.presets;
    meta["s_max"] = config.s_max;
    meta["r_max"] = config.r_max;
    meta["eval_budget"] = config.eval_budget;
    meta["weights"] = config.weights.empty() ? nlohmann::json("unit")
                                             : nlohmann::json(config.weights);
    meta["thresholds"] = output.thresholds;
    const std::string meta_path = out_dir + "/sweep_meta.json";
    std::ofstream meta_out(meta_path, std::ios::binary);
    if (!meta_out) throw Error("cannot write " + meta_path);
    meta_out << meta.dump(2) << '\n';
    written.push_back(meta_path);
    return written;
}

namespace {

// Rows that actually exercised the preset: pooled rows for pooled presets,
// every row for the individual baseline.
bool counts_for_mape(const SweepRecord& rec) {
    return rec.k >= 1 || rec.preset == "individual";
}

MapeTable build_mape_table(const std::vector<SweepRecord>& records, bool duration) {
    MapeTable table;
    // Group rows by (preset, n), preserving grid order within a group.
    std::map<std::string, std::map<int, std::vector<const SweepRecord*>>> groups;
    for (const SweepRecord& rec : records) {
        groups[rec.preset][rec.n].push_back(&rec);
    }

    for (Preset id : all_presets()) {
        const std::string name = preset_name(id);
        if (groups.count(name)) table.presets.push_back(name);
    }
    for (const auto& [preset, by_n] : groups) {
        if (std::find(table.presets.begin(), table.presets.end(), preset) ==
            table.presets.end()) {
            table.presets.push_back(preset);  // unknown labels last, still reported
        }
        for (const auto& [n, rows] : by_n) {
            if (std::find(table.ns.begin(), table.ns.end(), n) == table.ns.end()) {
                table.ns.push_back(n);
            }
        }
    }
    std::sort(table.ns.begin(), table.ns.end());

    for (const std::string& preset : table.presets) {
        for (const auto& [n, rows] : groups[preset]) {
            std::vector<double> p_grid;
            std::vector<double> expected;
            std::vector<double> observed;
            for (const SweepRecord* rec : rows) {
                if (!counts_for_mape(*rec)) continue;
                p_grid.push_back(rec->p);
                expected.push_back(duration ? rec->exp_duration_pm : rec->etm);
                observed.push_back(duration ? rec->avg_duration_pm : rec->atm);
            }
            std::array<MapeCell, 3> cells;
            if (!p_grid.empty()) {
                const metrics::IntervalPartition parts = metrics::interval_partition(p_grid);
                const std::array<const std::vector<std::size_t>*, 3> sets = {
                    &parts.low, &parts.mid, &parts.high};
                for (std::size_t which = 0; which < 3; ++which) {
                    if (sets[which]->empty()) continue;
                    std::vector<double> e;
                    std::vector<double> o;
                    for (std::size_t idx : *sets[which]) {
                        e.push_back(expected[idx]);
                        o.push_back(observed[idx]);
                    }
                    cells[which].present = true;
                    cells[which].value = metrics::mape(e, o);
                }
            }
            table.cells[preset][n] = cells;
        }
    }
    return table;
}

}  // namespace

MapeTable mape_tests_table(const std::vector<SweepRecord>& records) {
    return build_mape_table(records, false);
}

MapeTable mape_duration_table(const std::vector<SweepRecord>& records) {
    return build_mape_table(records, true);
}

std::string mape_table_to_csv(const MapeTable& table) {
    std::string out = "preset";
    for (int n : table.ns) {
        out += ",p_low_n" + std::to_string(n);
        out += ",p_mid_n" + std::to_string(n);
        out += ",p_high_n" + std::to_string(n);
    }
    out += '\n';
    for (const std::string& preset : table.presets) {
        out += preset;
        for (int n : table.ns) {
            const auto by_n = table.cells.find(preset);
            const bool have = by_n != table.cells.end() && by_n->second.count(n);
            for (std::size_t which = 0; which < 3; ++which) {
                if (have && by_n->second.at(n)[which].present) {
                    out += ',' + format_double(by_n->second.at(n)[which].value);
                } else {
                    out += ",-";
                }
            }
        }
        out += '\n';
    }
    return out;
}

std::string rate_curves_to_csv(const std::vector<SweepRecord>& records) {
    std::string out = "preset,n,p,rate\n";
    for (const SweepRecord& rec : records) {
        if (rec.p > metrics::kLowCut + 1e-12) continue;
        out += rec.preset;
        out += ',' + std::to_string(rec.n);
        out += ',' + format_double(rec.p);
        out += ',' + format_double(rec.rate);
        out += '\n';
    }
    return out;
}

std::vector<std::string> write_report(const std::vector<std::string>& sweep_csv_paths,
                                      const std::string& out_dir) {
    std::vector<SweepRecord> all;
    for (const std::string& path : sweep_csv_paths) {
        std::vector<SweepRecord> records = read_sweep_csv(path);
        all.insert(all.end(), records.begin(), records.end());
    }
    if (all.empty()) throw SchemaMismatch("no sweep rows to report on");

    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;
    const auto emit = [&](const std::string& name, const std::string& body) {
        const std::string path = out_dir + "/" + name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write " + path);
        out << body;
        written.push_back(path);
    };
    emit("mape_tests.csv", mape_table_to_csv(mape_tests_table(all)));
    emit("mape_duration.csv", mape_table_to_csv(mape_duration_table(all)));
    emit("rate_curves.csv", rate_curves_to_csv(all));
    return written;
}

namespace {

nlohmann::json parse_json_document(const std::string& text, const char* what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaMismatch(std::string(what) + " is not valid JSON: " + e.what());
    }
}

}  // namespace

Fixture parse_fixture_json(const std::string& text) {
    const nlohmann::json j = parse_json_document(text, "fixture");
    if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer()) {
        throw SchemaMismatch("fixture needs an integer \"n\"");
    }
    Fixture fx;
    fx.n = j["n"].get<int>();
    if (fx.n < 1) throw SchemaMismatch("fixture population size must be positive");

    if (!j.contains("defectives") || !j["defectives"].is_array()) {
        throw SchemaMismatch("fixture needs a \"defectives\" array of 1-based member ids");
    }
    for (const auto& item : j["defectives"]) {
        if (!item.is_number_integer()) throw SchemaMismatch("defective ids must be integers");
        const int id = item.get<int>();
        if (id < 1 || id > fx.n) {
            throw SchemaMismatch("defective id " + std::to_string(id) + " is outside 1.." +
                                 std::to_string(fx.n));
        }
        fx.defectives.push_back(id - 1);
    }

    if (j.contains("plan")) {
        fx.plan = plan_from_json(j["plan"].dump());
    }

    if (j.contains("stages")) {
        if (!j["stages"].is_array()) throw SchemaMismatch("fixture \"stages\" must be an array");
        for (const auto& stage : j["stages"]) {
            if (!stage.is_object() || !stage.contains("rounds") || !stage["rounds"].is_array()) {
                throw SchemaMismatch("each fixture stage needs a \"rounds\" array");
            }
            sim::StageAssignment assignment;
            for (const auto& round : stage["rounds"]) {
                if (!round.is_array()) throw SchemaMismatch("fixture rounds must be arrays");
                std::vector<int> perm;
                for (const auto& member : round) {
                    if (!member.is_number_integer()) {
                        throw SchemaMismatch("fixture member ids must be integers");
                    }
                    const int id = member.get<int>();
                    if (id < 1 || id > fx.n) {
                        throw SchemaMismatch("fixture member id " + std::to_string(id) +
                                             " is outside 1.." + std::to_string(fx.n));
                    }
                    perm.push_back(id - 1);
                }
                assignment.rounds.push_back(std::move(perm));
            }
            fx.assignments.push_back(std::move(assignment));
        }
    }
    return fx;
}

Fixture load_fixture(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_fixture_json(buffer.str());
}

SweepConfig parse_config_json(const std::string& text) {
    const nlohmann::json j = parse_json_document(text, "config");
    if (!j.is_object()) throw SchemaMismatch("config must be a JSON object");
    SweepConfig config;
    const auto get_int = [&](const char* key, int& into) {
        if (!j.contains(key)) return;
        if (!j[key].is_number_integer()) {
            throw SchemaMismatch(std::string("config \"") + key + "\" must be an integer");
        }
        into = j[key].get<int>();
    };
    const auto get_double = [&](const char* key, double& into) {
        if (!j.contains(key)) return;
        if (!j[key].is_number()) {
            throw SchemaMismatch(std::string("config \"") + key + "\" must be a number");
        }
        into = j[key].get<double>();
    };
    get_int("n", config.n);
    get_double("p_start", config.p_start);
    get_double("p_end", config.p_end);
    get_double("p_step", config.p_step);
    get_int("m_val", config.m_val);
    get_int("s_max", config.s_max);
    get_int("r_max", config.r_max);
    get_int("workers", config.workers);
    if (j.contains("base_seed")) {
        if (!j["base_seed"].is_number_unsigned() && !j["base_seed"].is_number_integer()) {
            throw SchemaMismatch("config \"base_seed\" must be an integer");
        }
        config.base_seed = j["base_seed"].get<std::uint64_t>();
    }
    if (j.contains("eval_budget")) {
        if (!j["eval_budget"].is_number_unsigned() && !j["eval_budget"].is_number_integer()) {
            throw SchemaMismatch("config \"eval_budget\" must be an integer");
        }
        config.eval_budget = j["eval_budget"].get<std::uint64_t>();
    }
    if (j.contains("presets")) {
        if (!j["presets"].is_array()) throw SchemaMismatch("config \"presets\" must be an array");
        for (const auto& item : j["presets"]) {
            if (!item.is_string()) throw SchemaMismatch("preset names must be strings");
            config.presets.push_back(parse_preset(item.get<std::string>()));
        }
    }
    if (j.contains("weights")) {
        if (!j["weights"].is_array()) throw SchemaMismatch("config \"weights\" must be an array");
        for (const auto& item : j["weights"]) {
            if (!item.is_number()) throw SchemaMismatch("weights must be numbers");
            config.weights.push_back(item.get<double>());
        }
    }
    if (j.contains("out_dir")) {
        if (!j["out_dir"].is_string()) throw SchemaMismatch("config \"out_dir\" must be a string");
        config.out_dir = j["out_dir"].get<std::string>();
    }
    return config;
}

SweepConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_json(buffer.str());
}

}  // namespace experiment
}  // namespace gt
