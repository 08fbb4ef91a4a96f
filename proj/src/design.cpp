#include "gt/design.hpp"

#include <charconv>
#include <sstream>

#include "gt/errors.hpp"
#include "json.hpp"

namespace gt {

const std::vector<Preset>& all_presets() {
    static const std::vector<Preset> order = {
        Preset::Individual, Preset::SpTwo,   Preset::DpTwo,  Preset::RpTwo,
        Preset::SpThree,    Preset::DpThree, Preset::SpFour, Preset::DpFour,
    };
    return order;
}

int preset_stage_count(Preset id) {
    switch (id) {
        case Preset::Individual: return 0;
        case Preset::SpTwo:
        case Preset::DpTwo:
        case Preset::RpTwo: return 1;
        case Preset::SpThree:
        case Preset::DpThree: return 2;
        case Preset::SpFour:
        case Preset::DpFour: return 3;
    }
    throw DomainError("unknown preset id");
}

bool preset_requires_r(Preset id) { return id == Preset::RpTwo; }

std::vector<int> preset_r_pattern(Preset id, std::optional<int> r_value) {
    if (preset_requires_r(id)) {
        if (!r_value) throw RValueRequired();
        if (*r_value < 1) throw NonPositiveParameter(1, 'r');
        return {*r_value};
    }
    if (r_value) throw RValueForbidden();
    const int k = preset_stage_count(id);
    if (k == 0) return {};
    std::vector<int> r(static_cast<std::size_t>(k), 1);
    if (id == Preset::DpTwo || id == Preset::DpThree || id == Preset::DpFour) r[0] = 2;
    return r;
}

std::string preset_name(Preset id) {
    switch (id) {
        case Preset::Individual: return "individual";
        case Preset::SpTwo: return "sp-two";
        case Preset::DpTwo: return "dp-two";
        case Preset::RpTwo: return "rp-two";
        case Preset::SpThree: return "sp-three";
        case Preset::DpThree: return "dp-three";
        case Preset::SpFour: return "sp-four";
        case Preset::DpFour: return "dp-four";
    }
    throw DomainError("unknown preset id");
}

Preset parse_preset(const std::string& name) {
    for (Preset id : all_presets()) {
        if (preset_name(id) == name) return id;
    }
    throw ValidationError("unknown preset \"" + name + "\"");
}

void validate_plan(const Plan& plan, int n) {
    if (n < 1) throw DomainError("population size must be positive");
    if (plan.stages.empty()) throw ValidationError("plan has no pooling stages");
    for (std::size_t i = 0; i < plan.stages.size(); ++i) {
        const Stage& st = plan.stages[i];
        const int stage_index = static_cast<int>(i) + 1;
        if (st.r < 1) throw NonPositiveParameter(stage_index, 'r');
        if (st.s < 1) throw NonPositiveParameter(stage_index, 's');
        if (st.s > n) throw GroupSizeExceedsPopulation(stage_index);
    }
}

bool has_degenerate_stage(const Plan& plan) {
    for (const Stage& st : plan.stages) {
        if (st.s == 1) return true;
    }
    return false;
}

Plan instantiate_preset(Preset id, const std::vector<int>& stage_sizes,
                        std::optional<int> r_value) {
    if (id == Preset::Individual) {
        throw ValidationError("individual testing has no pooling stages to instantiate");
    }
    const std::vector<int> r = preset_r_pattern(id, r_value);
    if (stage_sizes.size() != r.size()) {
        throw ArityMismatch("preset " + preset_name(id) + " takes " +
                            std::to_string(r.size()) + " stage sizes, got " +
                            std::to_string(stage_sizes.size()));
    }
    Plan plan;
    plan.label = preset_name(id);
    plan.stages.reserve(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        const int stage_index = static_cast<int>(i) + 1;
        if (stage_sizes[i] < 1) throw NonPositiveParameter(stage_index, 's');
        plan.stages.push_back(Stage{r[i], stage_sizes[i]});
    }
    return plan;
}

namespace {

int parse_positive_int(const std::string& token, const char* what) {
    int value = 0;
    const char* first = token.data();
    const char* last = first + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || value < 1) {
        throw ValidationError(std::string("expected a positive integer ") + what +
                              ", got \"" + token + "\"");
    }
    return value;
}

}  // namespace

Plan parse_plan_shorthand(const std::string& text) {
    Plan plan;
    if (!text.empty() && text.back() == ',') {
        throw ValidationError("plan \"" + text + "\" ends in a dangling comma");
    }
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        const std::size_t cross = token.find('x');
        if (cross == std::string::npos) {
            throw ValidationError("plan stage \"" + token + "\" is not of the form RxS");
        }
        const int r = parse_positive_int(token.substr(0, cross), "joint-test count");
        const int s = parse_positive_int(token.substr(cross + 1), "group size");
        plan.stages.push_back(Stage{r, s});
    }
    if (plan.stages.empty()) {
        throw ValidationError("plan \"" + text + "\" contains no stages");
    }
    return plan;
}

std::string plan_shorthand(const Plan& plan) {
    std::string out;
    for (std::size_t i = 0; i < plan.stages.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(plan.stages[i].r);
        out += 'x';
        out += std::to_string(plan.stages[i].s);
    }
    return out;
}

std::string plan_to_json(const Plan& plan) {
    nlohmann::json j;
    j["stages"] = nlohmann::json::array();
    for (const Stage& st : plan.stages) {
        j["stages"].push_back({{"r", st.r}, {"s", st.s}});
    }
    if (!plan.label.empty()) j["label"] = plan.label;
    return j.dump();
}

Plan plan_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaMismatch(std::string("plan is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("stages") || !j["stages"].is_array()) {
        throw SchemaMismatch("plan JSON must be an object with a \"stages\" array");
    }
    Plan plan;
    for (const auto& item : j["stages"]) {
        if (!item.is_object() || !item.contains("r") || !item.contains("s") ||
            !item["r"].is_number_integer() || !item["s"].is_number_integer()) {
            throw SchemaMismatch("each stage must be an object with integer \"r\" and \"s\"");
        }
        plan.stages.push_back(Stage{item["r"].get<int>(), item["s"].get<int>()});
    }
    if (plan.stages.empty()) throw SchemaMismatch("plan JSON has no stages");
    if (j.contains("label") && j["label"].is_string()) plan.label = j["label"].get<std::string>();
    return plan;
}

}  // namespace gt
