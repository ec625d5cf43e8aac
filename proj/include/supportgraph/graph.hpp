#ifndef SUPPORTGRAPH_GRAPH_HPP
#define SUPPORTGRAPH_GRAPH_HPP

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "supportgraph/ilp.hpp"
#include "supportgraph/similarity.hpp"
#include "supportgraph/view_model.hpp"

namespace supportgraph {

enum class Side { Question, Answer, Paragraph };

std::string_view to_string(Side side);

/// Constituent id standing for a whole answer text that has no ShallowParse view.
inline constexpr int kWholeText = -1;

struct NodeRef {
    Side side = Side::Question;
    int answer = -1;  // answer index when side == Answer
    ViewKind view = ViewKind::Tokens;
    int constituent = 0;

    friend bool operator==(const NodeRef&, const NodeRef&) = default;
    friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

std::string to_string(const NodeRef& ref);

enum class EdgeKind { Structural, Alignment };

enum class LabelFilter { Any, Predicate, Argument };

/// Which constituents of which text(s) a rule talks about. Side::Answer
/// selects every answer option; for answers, ShallowParse falls back to the
/// whole text when the view is absent.
struct Selector {
    Side side = Side::Question;
    ViewKind view = ViewKind::Tokens;
    LabelFilter filter = LabelFilter::Any;
    bool content_only = false;  // skip constituents made only of stopwords/punctuation
};

struct AlignmentRule {
    std::string family;
    Selector source;  // hypothesis side for directional scorers
    Selector target;
    ScorerKind scorer = ScorerKind::Entailment;
    double threshold = 0.0;
};

struct StructuralRule {
    std::string family;
    Side side = Side::Paragraph;
    ViewKind view = ViewKind::VerbSRL;
    double weight = 0.0;
};

/// Per-reasoner description of the graph to build.
struct Recipe {
    std::vector<Selector> nodes;
    std::vector<AlignmentRule> alignments;
    std::vector<StructuralRule> structural;

    const AlignmentRule* alignment_rule(std::string_view family) const;
};

struct GraphNode {
    NodeRef ref;
    std::string surface;
    std::string label;
    std::optional<int> frame;
    CharRange span;
};

struct CandidateEdge {
    NodeRef from;
    NodeRef to;
    EdgeKind kind = EdgeKind::Alignment;
    double weight = 0.0;
    std::string family;
};

struct GraphEdge {
    int from = 0;
    int to = 0;
    EdgeKind kind = EdgeKind::Alignment;
    double weight = 0.0;
    std::string family;
};

/// Nodes sorted by (side, answer, view, id); immutable once assembled.
struct AugmentedGraph {
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;
    Recipe recipe;

    /// Index of `ref`, or -1.
    int index_of(const NodeRef& ref) const;
    const GraphNode& node(int index) const { return nodes.at(static_cast<std::size_t>(index)); }
    /// Edge indices touching node `index`.
    std::vector<int> incident(int index) const;
};

/// One text's view constituents addressed by a rule endpoint.
struct Endpoint {
    const AnnotatedText* text = nullptr;
    Side side = Side::Question;
    int answer = -1;
    Selector selector;
};

/// Scores every (source, target) constituent pair and keeps the pairs whose
/// score strictly exceeds `threshold`, weighted by the score. Pairs come out
/// in (source id, target id) order regardless of `execution`.
std::vector<CandidateEdge> build_alignment_edges(const Endpoint& source, const Endpoint& target, ScorerKind scorer,
                                                 double threshold, const EmbeddingTable& table,
                                                 std::string family = "alignment",
                                                 Execution execution = Execution::Parallel);

/// SRL views yield predicate->argument edges per frame, Coreference yields
/// every within-cluster mention pair, Dependency its tree edges.
std::vector<CandidateEdge> build_structural_edges(const AnnotatedText& text, Side side, int answer,
                                                  const std::vector<StructuralRule>& rules);

/// Throws MissingViewError naming the absent view and text.
AugmentedGraph assemble(const QAInstance& instance, const Recipe& recipe, const EmbeddingTable& table,
                        Execution execution = Execution::Parallel);

/// Constituents of `text` picked by `selector` (answers honour the whole-text fallback).
std::vector<GraphNode> select_nodes(const AnnotatedText& text, Side side, int answer, const Selector& selector);

nlohmann::json to_json(const AugmentedGraph& graph);

} // namespace supportgraph

#endif
