#ifndef SUPPORTGRAPH_REASONERS_HPP
#define SUPPORTGRAPH_REASONERS_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "supportgraph/config.hpp"
#include "supportgraph/graph.hpp"
#include "supportgraph/ilp.hpp"
#include "supportgraph/similarity.hpp"
#include "supportgraph/view_model.hpp"

namespace supportgraph {

enum class Role { Answer, AnswerChunk, Node, Edge, Sentence, Chain, Penalty, Boost };

std::string_view to_string(Role role);

/// What a model variable stands for. `index` is an answer index, graph node,
/// graph edge, sentence index or coreference cluster id depending on `role`,
/// and -1 for penalties and boosts.
struct VarRole {
    Role role = Role::Node;
    int index = -1;
};

struct CompiledModel {
    ReasonerKind reasoner = ReasonerKind::Comb1;
    std::shared_ptr<const AugmentedGraph> graph;
    IlpModel model;
    std::vector<VarRole> roles;  // by variable id
    std::vector<VarId> answer_vars;
    /// Graph node -> variable. A single-chunk answer shares its answer variable.
    std::vector<std::optional<VarId>> node_vars;
    std::vector<std::optional<VarId>> edge_vars;
    std::map<int, VarId> sentence_vars;
    std::map<int, VarId> chain_vars;
    std::vector<CharRange> sentences;  // paragraph sentences, when the reasoner uses them

    VarId add(Role role, int index, std::string name, double objective);
    std::optional<VarId> node_var(int node) const { return node_vars.at(static_cast<std::size_t>(node)); }
    std::optional<VarId> edge_var(int edge) const { return edge_vars.at(static_cast<std::size_t>(edge)); }
};

/// The graph description each reasoner compiles from.
Recipe recipe_for(ReasonerKind kind, const Config& config, const QAInstance& instance);

/// Answer selection core shared by every reasoner: one variable per option,
/// exactly one option chosen, a chosen option needs an active incident edge,
/// and nothing may attach to an unchosen option.
CompiledModel compile_general_body(const QAInstance& instance, std::shared_ptr<const AugmentedGraph> graph,
                                   ReasonerKind kind);

/// Builds the graph and the full model. Throws MissingViewError when a view
/// the reasoner needs is absent.
CompiledModel compile(ReasonerKind kind, const QAInstance& instance, const Config& config,
                      const EmbeddingTable& table, Execution execution = Execution::Parallel);

/// The active subgraph of an optimal solution.
struct SupportGraph {
    ReasonerKind reasoner = ReasonerKind::Comb1;
    std::shared_ptr<const AugmentedGraph> graph;
    int answer = -1;
    std::vector<int> active_nodes;
    std::vector<int> active_edges;
    std::vector<int> active_sentences;
    std::vector<int> active_chains;
    double objective = 0.0;
};

/// nullopt for an infeasible solution. Throws InternalError when the decoded
/// graph breaks a structural invariant.
std::optional<SupportGraph> decode(const CompiledModel& compiled, const Solution& solution);

enum class OutcomeStatus { Answered, Abstained, Skipped };

std::string_view to_string(OutcomeStatus status);

struct ReasonerOutcome {
    ReasonerKind reasoner = ReasonerKind::Comb1;
    OutcomeStatus status = OutcomeStatus::Skipped;
    std::optional<SupportGraph> support;
    double confidence = 0.0;
    std::string note;  // why the reasoner was skipped
    std::size_t variables = 0;
    std::size_t constraints = 0;
    std::uint64_t search_nodes = 0;
};

struct AnswerDecision {
    int answer = 0;
    double confidence = 0.0;
    std::optional<ReasonerKind> reasoner;  // none when every reasoner abstained
    std::vector<ReasonerOutcome> outcomes;  // in request order

    const SupportGraph* support() const;
};

/// Runs one reasoner end to end.
ReasonerOutcome run_reasoner(ReasonerKind kind, const QAInstance& instance, const Config& config,
                             const EmbeddingTable& table);

/// Runs the requested reasoners (concurrently under Parallel) and keeps the
/// most confident answer; ties go to the higher-priority reasoner, then the
/// lower answer index. ResourceLimit propagates.
AnswerDecision answer(const QAInstance& instance, const std::vector<ReasonerKind>& reasoners, const Config& config,
                      const EmbeddingTable& table, Execution execution = Execution::Parallel);

} // namespace supportgraph

#endif
