#include "supportgraph/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "supportgraph/errors.hpp"

namespace supportgraph {

using nlohmann::json;

std::string_view to_string(ReasonerKind kind) {
    switch (kind) {
    case ReasonerKind::Comb1: return "comb1";
    case ReasonerKind::Comb2: return "comb2";
    case ReasonerKind::Comb3: return "comb3";
    case ReasonerKind::Comb5: return "comb5";
    }
    return "?";
}

std::optional<ReasonerKind> parse_reasoner(std::string_view name) {
    for (const auto k : kAllReasoners) {
        if (to_string(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

int priority(ReasonerKind kind) {
    switch (kind) {
    case ReasonerKind::Comb5: return 4;
    case ReasonerKind::Comb3: return 3;
    case ReasonerKind::Comb2: return 2;
    case ReasonerKind::Comb1: return 1;
    }
    return 0;
}

namespace {

enum class Field { Threshold, Weight, Scale, Penalties, Boosts, Count, Positive, Flag };

// One list of keys per section drives parsing, printing and scaling.
template <class C, class F>
void fields(C& c, F&& f) {
    if constexpr (std::is_same_v<std::remove_const_t<C>, Comb1Config>) {
        f("alignment_weight", c.alignment_weight, Field::Scale);
        f("alignment_threshold", c.alignment_threshold, Field::Threshold);
        f("answer_threshold", c.answer_threshold, Field::Threshold);
        f("question_term_penalties", c.question_term_penalties, Field::Penalties);
        f("term_alignment_penalties", c.term_alignment_penalties, Field::Penalties);
        f("answer_chunk_penalties", c.answer_chunk_penalties, Field::Penalties);
        f("chunk_edge_penalties", c.chunk_edge_penalties, Field::Penalties);
        f("sentence_weight", c.sentence_weight, Field::Weight);
        f("dependency_boost", c.dependency_boost, Field::Weight);
        f("dependency_max_distance", c.dependency_max_distance, Field::Positive);
        f("distance_boosts", c.distance_boosts, Field::Boosts);
        f("use_coreference", c.use_coreference, Field::Flag);
        f("coref_edge_weight", c.coref_edge_weight, Field::Weight);
    } else if constexpr (std::is_same_v<std::remove_const_t<C>, Comb2Config>) {
        f("alignment_weight", c.alignment_weight, Field::Scale);
        f("question_node_weight", c.question_node_weight, Field::Weight);
        f("paragraph_node_weight", c.paragraph_node_weight, Field::Weight);
        f("frame_edge_weight", c.frame_edge_weight, Field::Weight);
        f("argument_threshold", c.argument_threshold, Field::Threshold);
        f("predicate_threshold", c.predicate_threshold, Field::Threshold);
        f("answer_threshold", c.answer_threshold, Field::Threshold);
        f("min_question_constituents", c.min_question_constituents, Field::Count);
        f("min_question_predicates", c.min_question_predicates, Field::Count);
        f("max_paragraph_predicates", c.max_paragraph_predicates, Field::Count);
    } else if constexpr (std::is_same_v<std::remove_const_t<C>, Comb3Config>) {
        f("alignment_weight", c.alignment_weight, Field::Scale);
        f("question_node_weight", c.question_node_weight, Field::Weight);
        f("paragraph_node_weight", c.paragraph_node_weight, Field::Weight);
        f("mention_node_weight", c.mention_node_weight, Field::Weight);
        f("chain_weight", c.chain_weight, Field::Weight);
        f("chain_edge_weight", c.chain_edge_weight, Field::Weight);
        f("frame_edge_weight", c.frame_edge_weight, Field::Weight);
        f("argument_threshold", c.argument_threshold, Field::Threshold);
        f("predicate_threshold", c.predicate_threshold, Field::Threshold);
        f("answer_threshold", c.answer_threshold, Field::Threshold);
        f("max_chains", c.max_chains, Field::Count);
        f("min_question_constituents", c.min_question_constituents, Field::Count);
        f("max_paragraph_predicates", c.max_paragraph_predicates, Field::Count);
        f("min_predicate_degree", c.min_predicate_degree, Field::Count);
    } else {
        f("alignment_weight", c.alignment_weight, Field::Scale);
        f("question_node_weight", c.question_node_weight, Field::Weight);
        f("paragraph_node_weight", c.paragraph_node_weight, Field::Weight);
        f("prep_node_weight", c.prep_node_weight, Field::Weight);
        f("prep_frame_edge_weight", c.prep_frame_edge_weight, Field::Weight);
        f("verb_frame_edge_weight", c.verb_frame_edge_weight, Field::Weight);
        f("prep_verb_threshold", c.prep_verb_threshold, Field::Threshold);
        f("argument_threshold", c.argument_threshold, Field::Threshold);
        f("predicate_threshold", c.predicate_threshold, Field::Threshold);
        f("answer_threshold", c.answer_threshold, Field::Threshold);
        f("min_verb_argument_degree", c.min_verb_argument_degree, Field::Count);
    }
}

std::string where(std::string_view section, std::string_view key) {
    return std::string(section) + "." + std::string(key);
}

double read_number(const json& v, std::string_view path) {
    if (!v.is_number()) {
        throw ConfigError(std::string(path) + ": expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw ConfigError(std::string(path) + ": not finite");
    }
    return d;
}

struct Reader {
    const json& obj;
    std::string_view section;

    void operator()(std::string_view key, double& out, Field kind) const {
        const auto it = obj.find(std::string(key));
        if (it == obj.end()) return;
        const std::string path = where(section, key);
        const double d = read_number(*it, path);
        if (kind == Field::Threshold && (d < 0.0 || d > 1.0)) {
            throw ConfigError(path + ": threshold must lie in [0, 1]");
        }
        if (kind == Field::Scale && !(d > 0.0)) {
            throw ConfigError(path + ": must be positive");
        }
        out = d;
    }

    void operator()(std::string_view key, int& out, Field kind) const {
        const auto it = obj.find(std::string(key));
        if (it == obj.end()) return;
        const std::string path = where(section, key);
        if (!it->is_number_integer()) {
            throw ConfigError(path + ": expected an integer");
        }
        const long long v = it->get<long long>();
        const long long lo = kind == Field::Positive ? 1 : 0;
        if (v < lo || v > 1'000'000) {
            throw ConfigError(path + ": out of range");
        }
        out = static_cast<int>(v);
    }

    void operator()(std::string_view key, bool& out, Field) const {
        const auto it = obj.find(std::string(key));
        if (it == obj.end()) return;
        if (!it->is_boolean()) {
            throw ConfigError(where(section, key) + ": expected a boolean");
        }
        out = it->get<bool>();
    }

    void operator()(std::string_view key, Ladder& out, Field kind) const {
        const auto it = obj.find(std::string(key));
        if (it == obj.end()) return;
        const std::string path = where(section, key);
        if (!it->is_array() || it->size() != out.size()) {
            throw ConfigError(path + ": expected an array of 3 numbers");
        }
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double d = read_number((*it)[i], path);
            if (kind == Field::Penalties && !(d < 0.0)) {
                throw ConfigError(path + ": penalties must be negative");
            }
            if (kind == Field::Boosts && d < 0.0) {
                throw ConfigError(path + ": boosts must be non-negative");
            }
            out[i] = d;
        }
    }
};

template <class C>
void read_section(const json& doc, std::string_view section, C& c) {
    const auto it = doc.find(std::string(section));
    if (it == doc.end()) return;
    if (!it->is_object()) {
        throw ConfigError(std::string(section) + ": expected an object");
    }
    std::set<std::string> known;
    fields(c, [&](std::string_view key, auto&, Field) { known.insert(std::string(key)); });
    for (const auto& [key, value] : it->items()) {
        if (!known.contains(key)) {
            throw ConfigError("unknown config key " + where(section, key));
        }
    }
    fields(c, Reader{*it, section});
}

template <class C>
json write_section(const C& c) {
    json out = json::object();
    fields(c, [&](std::string_view key, const auto& v, Field) { out[std::string(key)] = v; });
    return out;
}

template <class C>
void scale_section(C& c, double factor) {
    fields(c, [&](std::string_view, auto& v, Field kind) {
        using T = std::remove_cvref_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
            if (kind == Field::Weight || kind == Field::Scale) v *= factor;
        } else if constexpr (std::is_same_v<T, Ladder>) {
            for (auto& x : v) x *= factor;
        }
    });
}

} // namespace

Config parse_config(const json& doc) {
    if (!doc.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    static const std::set<std::string> top{"solver", "reasoners", "comb1", "comb2", "comb3", "comb5"};
    for (const auto& [key, value] : doc.items()) {
        if (!top.contains(key)) {
            throw ConfigError("unknown config key " + key);
        }
    }
    Config c;
    if (const auto it = doc.find("solver"); it != doc.end()) {
        if (!it->is_object()) throw ConfigError("solver: expected an object");
        for (const auto& [key, value] : it->items()) {
            if (key != "node_budget") throw ConfigError("unknown config key solver." + key);
            if (!value.is_number_unsigned() || value.get<std::uint64_t>() == 0) {
                throw ConfigError("solver.node_budget: expected a positive integer");
            }
            c.node_budget = value.get<std::uint64_t>();
        }
    }
    if (const auto it = doc.find("reasoners"); it != doc.end()) {
        if (!it->is_array()) throw ConfigError("reasoners: expected an array of names");
        c.reasoners.clear();
        for (const auto& v : *it) {
            const auto kind = v.is_string() ? parse_reasoner(v.get<std::string>()) : std::nullopt;
            if (!kind) throw ConfigError("reasoners: unknown reasoner " + v.dump());
            if (std::find(c.reasoners.begin(), c.reasoners.end(), *kind) == c.reasoners.end()) {
                c.reasoners.push_back(*kind);
            }
        }
    }
    read_section(doc, "comb1", c.comb1);
    read_section(doc, "comb2", c.comb2);
    read_section(doc, "comb3", c.comb3);
    read_section(doc, "comb5", c.comb5);
    return c;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

json to_json(const Config& config) {
    json reasoners = json::array();
    for (const auto k : config.reasoners) reasoners.push_back(std::string(to_string(k)));
    return json{{"solver", {{"node_budget", config.node_budget}}},
                {"reasoners", std::move(reasoners)},
                {"comb1", write_section(config.comb1)},
                {"comb2", write_section(config.comb2)},
                {"comb3", write_section(config.comb3)},
                {"comb5", write_section(config.comb5)}};
}

Config scale_weights(const Config& config, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw ConfigError("weight scale factor must be positive");
    }
    Config c = config;
    scale_section(c.comb1, factor);
    scale_section(c.comb2, factor);
    scale_section(c.comb3, factor);
    scale_section(c.comb5, factor);
    return c;
}

double alignment_weight(const Config& config, ReasonerKind kind) {
    switch (kind) {
    case ReasonerKind::Comb1: return config.comb1.alignment_weight;
    case ReasonerKind::Comb2: return config.comb2.alignment_weight;
    case ReasonerKind::Comb3: return config.comb3.alignment_weight;
    case ReasonerKind::Comb5: return config.comb5.alignment_weight;
    }
    return 1.0;
}

} // namespace supportgraph
