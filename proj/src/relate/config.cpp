#include "timeflow/interchange.hpp"
#include "timeflow/relate.hpp"
#include "timeflow/text.hpp"

namespace timeflow::relate {

std::vector<Violation> CausalCueLexicon::validate() const {
    std::vector<Violation> out;
    if (cues.empty()) {
        out.push_back({"causal_cues", "cue-lexicon", "cue lexicon is empty"});
    }
    for (const auto& c : cues) {
        if (c.empty() || c != text::lower(c)) {
            out.push_back({"causal_cues", "cue-lexicon", "cue '" + c + "' must be nonempty lowercase"});
        }
    }
    return out;
}

bool RelateConfig::derives(RelationType type, Level level) const {
    if (!admissible(type, level)) {
        return false;
    }
    auto it = derive_levels.find(type);
    return it == derive_levels.end() || it->second.count(level) > 0;
}

RelateConfig parse_relate_config(const nlohmann::json& j) {
    RelateConfig c;
    try {
        if (j.contains("derive_levels")) {
            for (const auto& [name, levels] : j.at("derive_levels").items()) {
                auto type = parse_relation_type(name);
                if (!type) {
                    throw ParseError("unknown relation type '" + name + "' in derive_levels");
                }
                auto& set = c.derive_levels[*type];
                for (const auto& l : levels) {
                    set.insert(l.get<Level>());
                }
            }
        }
        c.causal_auto_accept_days = j.value("causal_auto_accept_days", c.causal_auto_accept_days);
        if (j.contains("causal_cues")) {
            c.cues.cues = j.at("causal_cues").get<std::vector<std::string>>();
        }
        if (j.contains("tfidf_threshold")) {
            c.tfidf_threshold = j.at("tfidf_threshold").get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed relate config: ") + e.what());
    }
    auto violations = c.cues.validate();
    if (c.causal_auto_accept_days < 0) {
        violations.push_back({"causal_auto_accept_days", "config-range", "must not be negative"});
    }
    if (c.tfidf_threshold && !(*c.tfidf_threshold >= 0.0 && *c.tfidf_threshold <= 1.0)) {
        violations.push_back({"tfidf_threshold", "config-range", "threshold outside [0,1]"});
    }
    if (!violations.empty()) {
        throw ValidationError(std::move(violations));
    }
    return c;
}

nlohmann::json to_json(const RelateConfig& config) {
    nlohmann::json levels = nlohmann::json::object();
    for (const auto& [type, set] : config.derive_levels) {
        auto& arr = levels[std::string(to_string(type))] = nlohmann::json::array();
        for (auto l : set) {
            arr.push_back(l);
        }
    }
    nlohmann::json j = {{"derive_levels", levels},
                        {"causal_auto_accept_days", config.causal_auto_accept_days},
                        {"causal_cues", config.cues.cues}};
    if (config.tfidf_threshold) {
        j["tfidf_threshold"] = *config.tfidf_threshold;
    }
    return j;
}

std::vector<AssertedRelation> parse_assertions(const nlohmann::json& j) {
    std::vector<AssertedRelation> out;
    try {
        for (const auto& r : j.at("relations")) {
            AssertedRelation a;
            a.type = r.at("type").get<RelationType>();
            a.from = r.at("from").get<std::string>();
            a.to = r.at("to").get<std::string>();
            a.note = r.value("note", "");
            out.push_back(std::move(a));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed assertions: ") + e.what());
    }
    return out;
}

nlohmann::json to_json(const std::vector<AssertedRelation>& assertions) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& a : assertions) {
        arr.push_back({{"type", a.type}, {"from", a.from}, {"to", a.to}, {"note", a.note}});
    }
    return {{"relations", arr}};
}

}  // namespace timeflow::relate
