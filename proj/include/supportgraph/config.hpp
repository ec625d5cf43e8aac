#ifndef SUPPORTGRAPH_CONFIG_HPP
#define SUPPORTGRAPH_CONFIG_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "supportgraph/ilp.hpp"

namespace supportgraph {

enum class ReasonerKind { Comb1, Comb2, Comb3, Comb5 };

inline constexpr std::array<ReasonerKind, 4> kAllReasoners = {ReasonerKind::Comb1, ReasonerKind::Comb2,
                                                              ReasonerKind::Comb3, ReasonerKind::Comb5};

std::string_view to_string(ReasonerKind kind);
std::optional<ReasonerKind> parse_reasoner(std::string_view name);

/// Higher wins when two reasoners tie on confidence.
int priority(ReasonerKind kind);

/// Three weights for k = 1, 2, 3.
using Ladder = std::array<double, 3>;

// Shallow alignment over question tokens and paragraph chunks.
struct Comb1Config {
    double alignment_weight = 1.0;  // multiplies every alignment score in the objective
    double alignment_threshold = 0.6;  // question term -> paragraph chunk, entailment
    double answer_threshold = 0.6;     // paragraph chunk -> answer chunk, entailment
    Ladder question_term_penalties{-0.05, -0.1, -0.2};
    Ladder term_alignment_penalties{-0.05, -0.1, -0.2};
    Ladder answer_chunk_penalties{-0.05, -0.1, -0.2};
    Ladder chunk_edge_penalties{-0.05, -0.1, -0.2};
    double sentence_weight = -0.1;
    double dependency_boost = 0.05;
    int dependency_max_distance = 1;
    Ladder distance_boosts{0.03, 0.02, 0.01};
    bool use_coreference = true;
    double coref_edge_weight = 0.0;
};

// Verb-SRL on both sides.
struct Comb2Config {
    double alignment_weight = 1.0;  // multiplies every alignment score in the objective
    double question_node_weight = 0.01;
    double paragraph_node_weight = 0.01;
    double frame_edge_weight = 0.01;
    double argument_threshold = 0.6;   // entailment
    double predicate_threshold = 0.6;  // entailment
    double answer_threshold = 0.6;     // entailment
    int min_question_constituents = 2;
    int min_question_predicates = 1;
    int max_paragraph_predicates = 1;
};

// Verb-SRL in the question, Verb-SRL plus coreference in the paragraph.
struct Comb3Config {
    double alignment_weight = 1.0;  // multiplies every alignment score in the objective
    double question_node_weight = 0.001;
    double paragraph_node_weight = 0.001;
    double mention_node_weight = 0.001;
    double chain_weight = -0.0001;
    double chain_edge_weight = 0.02;
    double frame_edge_weight = 0.01;
    double argument_threshold = 0.6;   // question argument -> coref mention, entailment
    double predicate_threshold = 0.4;  // phrase similarity
    double answer_threshold = 0.65;    // symmetric entailment
    int max_chains = 1;
    int min_question_constituents = 1;
    int max_paragraph_predicates = 1;
    int min_predicate_degree = 2;
};

// Verb-SRL in the question, Verb-SRL plus Prep-SRL in the paragraph.
struct Comb5Config {
    double alignment_weight = 1.0;  // multiplies every alignment score in the objective
    double question_node_weight = 0.001;
    double paragraph_node_weight = 0.001;
    double prep_node_weight = 0.001;
    double prep_frame_edge_weight = 0.02;
    double verb_frame_edge_weight = 0.01;
    double prep_verb_threshold = 0.7;  // phrase similarity
    double argument_threshold = 0.6;   // entailment
    double predicate_threshold = 0.5;  // phrase similarity
    double answer_threshold = 0.7;     // entailment
    int min_verb_argument_degree = 2;
};

struct Config {
    std::uint64_t node_budget = kDefaultNodeBudget;
    std::vector<ReasonerKind> reasoners{kAllReasoners.begin(), kAllReasoners.end()};
    Comb1Config comb1;
    Comb2Config comb2;
    Comb3Config comb3;
    Comb5Config comb5;
};

/// Starts from the defaults and overrides the keys present. Unknown keys and
/// ill-typed or out-of-range values throw ConfigError.
Config parse_config(const nlohmann::json& doc);
Config load_config(const std::filesystem::path& path);
nlohmann::json to_json(const Config& config);

/// The active section's alignment_weight.
double alignment_weight(const Config& config, ReasonerKind kind);

/// Every objective weight (node, edge, chain, penalty, boost, alignment multiplier) multiplied by
/// `factor`; thresholds and counts unchanged.
Config scale_weights(const Config& config, double factor);

} // namespace supportgraph

#endif
