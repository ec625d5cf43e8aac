#include "supportgraph/reasoners.hpp"

#include <algorithm>
#include <deque>
#include <exception>
#include <set>

#include "supportgraph/errors.hpp"

namespace supportgraph {

std::string_view to_string(Role role) {
    switch (role) {
    case Role::Answer: return "answer";
    case Role::AnswerChunk: return "answer-chunk";
    case Role::Node: return "node";
    case Role::Edge: return "edge";
    case Role::Sentence: return "sentence";
    case Role::Chain: return "chain";
    case Role::Penalty: return "penalty";
    case Role::Boost: return "boost";
    }
    return "?";
}

std::string_view to_string(OutcomeStatus status) {
    switch (status) {
    case OutcomeStatus::Answered: return "answered";
    case OutcomeStatus::Abstained: return "abstained";
    case OutcomeStatus::Skipped: return "skipped";
    }
    return "?";
}

VarId CompiledModel::add(Role role, int index, std::string name, double objective) {
    const VarId v = model.add_variable(std::move(name), objective);
    roles.push_back({role, index});
    return v;
}

const SupportGraph* AnswerDecision::support() const {
    if (!reasoner) return nullptr;
    for (const auto& o : outcomes) {
        if (o.reasoner == *reasoner && o.support) return &*o.support;
    }
    return nullptr;
}

// ------------------------------------------------------------------ recipes

namespace {

Selector q(ViewKind view, LabelFilter filter = LabelFilter::Any, bool content_only = false) {
    return {Side::Question, view, filter, content_only};
}
Selector p(ViewKind view, LabelFilter filter = LabelFilter::Any) { return {Side::Paragraph, view, filter, false}; }
Selector answers() { return {Side::Answer, ViewKind::ShallowParse, LabelFilter::Any, false}; }

constexpr auto kArg = LabelFilter::Argument;
constexpr auto kPred = LabelFilter::Predicate;

} // namespace

Recipe recipe_for(ReasonerKind kind, const Config& config, const QAInstance& instance) {
    Recipe r;
    const auto E = ScorerKind::Entailment;
    const auto P = ScorerKind::PhraseSim;
    const auto S = ScorerKind::Symmetric;
    switch (kind) {
    case ReasonerKind::Comb1: {
        const auto& c = config.comb1;
        r.nodes = {q(ViewKind::Tokens, LabelFilter::Any, true), p(ViewKind::ShallowParse), answers()};
        r.alignments = {
            {"q-term~p-chunk", q(ViewKind::Tokens, LabelFilter::Any, true), p(ViewKind::ShallowParse), E,
             c.alignment_threshold},
            {"answer~p-chunk", answers(), p(ViewKind::ShallowParse), E, c.answer_threshold},
        };
        if (c.use_coreference && instance.paragraph.has(ViewKind::Coreference)) {
            r.structural.push_back({"p-chain", Side::Paragraph, ViewKind::Coreference, c.coref_edge_weight});
        }
        break;
    }
    case ReasonerKind::Comb2: {
        const auto& c = config.comb2;
        r.nodes = {q(ViewKind::VerbSRL), p(ViewKind::VerbSRL), answers()};
        r.alignments = {
            {"q-arg~p-arg", q(ViewKind::VerbSRL, kArg), p(ViewKind::VerbSRL, kArg), E, c.argument_threshold},
            {"q-pred~p-pred", q(ViewKind::VerbSRL, kPred), p(ViewKind::VerbSRL, kPred), E, c.predicate_threshold},
            {"answer~p-arg", answers(), p(ViewKind::VerbSRL, kArg), E, c.answer_threshold},
        };
        r.structural = {{"p-frame", Side::Paragraph, ViewKind::VerbSRL, c.frame_edge_weight}};
        break;
    }
    case ReasonerKind::Comb3: {
        const auto& c = config.comb3;
        r.nodes = {q(ViewKind::VerbSRL), p(ViewKind::VerbSRL), p(ViewKind::Coreference), answers()};
        r.alignments = {
            {"q-arg~p-mention", q(ViewKind::VerbSRL, kArg), p(ViewKind::Coreference), E, c.argument_threshold},
            {"q-pred~p-pred", q(ViewKind::VerbSRL, kPred), p(ViewKind::VerbSRL, kPred), P, c.predicate_threshold},
            {"answer~p-arg", answers(), p(ViewKind::VerbSRL, kArg), S, c.answer_threshold},
        };
        r.structural = {{"p-chain", Side::Paragraph, ViewKind::Coreference, c.chain_edge_weight},
                        {"p-frame", Side::Paragraph, ViewKind::VerbSRL, c.frame_edge_weight}};
        break;
    }
    case ReasonerKind::Comb5: {
        const auto& c = config.comb5;
        r.nodes = {q(ViewKind::VerbSRL), p(ViewKind::VerbSRL), p(ViewKind::PrepSRL), answers()};
        r.alignments = {
            {"p-prep-arg~p-verb-arg", p(ViewKind::PrepSRL, kArg), p(ViewKind::VerbSRL, kArg), P,
             c.prep_verb_threshold},
            {"q-arg~p-verb-arg", q(ViewKind::VerbSRL, kArg), p(ViewKind::VerbSRL, kArg), E, c.argument_threshold},
            {"q-arg~p-prep-arg", q(ViewKind::VerbSRL, kArg), p(ViewKind::PrepSRL, kArg), E, c.argument_threshold},
            {"q-pred~p-pred", q(ViewKind::VerbSRL, kPred), p(ViewKind::VerbSRL, kPred), P, c.predicate_threshold},
            {"answer~p-verb-arg", answers(), p(ViewKind::VerbSRL, kArg), E, c.answer_threshold},
        };
        r.structural = {{"p-prep-frame", Side::Paragraph, ViewKind::PrepSRL, c.prep_frame_edge_weight},
                        {"p-verb-frame", Side::Paragraph, ViewKind::VerbSRL, c.verb_frame_edge_weight}};
        break;
    }
    }
    return r;
}

// ------------------------------------------------------------ general body

namespace {

std::vector<std::vector<int>> adjacency(const AugmentedGraph& g) {
    std::vector<std::vector<int>> adj(g.nodes.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        adj[static_cast<std::size_t>(g.edges[e].from)].push_back(static_cast<int>(e));
        adj[static_cast<std::size_t>(g.edges[e].to)].push_back(static_cast<int>(e));
    }
    return adj;
}

std::string node_name(const AugmentedGraph& g, int node) { return to_string(g.node(node).ref); }

std::string edge_name(const AugmentedGraph& g, int edge) {
    const auto& e = g.edges[static_cast<std::size_t>(edge)];
    return "edge[" + e.family + "](" + node_name(g, e.from) + "," + node_name(g, e.to) + ")";
}

VarId edge_var_or_add(CompiledModel& cm, int edge) {
    auto& slot = cm.edge_vars[static_cast<std::size_t>(edge)];
    if (!slot) {
        const auto& e = cm.graph->edges[static_cast<std::size_t>(edge)];
        slot = cm.add(Role::Edge, edge, edge_name(*cm.graph, edge), e.weight);
    }
    return *slot;
}

VarId require_node_var(const CompiledModel& cm, int node) {
    const auto v = cm.node_var(node);
    if (!v) {
        throw InternalError("graph node " + node_name(*cm.graph, node) + " has no model variable");
    }
    return *v;
}

template <class Pred>
std::vector<int> nodes_where(const AugmentedGraph& g, Pred pred) {
    std::vector<int> out;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        if (pred(g.nodes[i])) out.push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<VarId> vars_of(const CompiledModel& cm, const std::vector<int>& nodes) {
    std::vector<VarId> out;
    for (const int n : nodes) out.push_back(require_node_var(cm, n));
    return out;
}

void add_nodes(CompiledModel& cm, const std::vector<int>& nodes, double weight) {
    for (const int n : nodes) {
        cm.node_vars[static_cast<std::size_t>(n)] = cm.add(Role::Node, n, node_name(*cm.graph, n), weight);
    }
}

// Every edge variable is the AND of its endpoint nodes.
void link_edges(CompiledModel& cm) {
    for (std::size_t e = 0; e < cm.graph->edges.size(); ++e) {
        const auto& edge = cm.graph->edges[e];
        const VarId y = edge_var_or_add(cm, static_cast<int>(e));
        const std::vector<VarId> ends{require_node_var(cm, edge.from), require_node_var(cm, edge.to)};
        add_iff_and(cm.model, y, ends);
    }
}

// sum(terms) >= coef * x, written as coef * x - sum(terms) <= 0.
void require_support(CompiledModel& cm, VarId x, const std::vector<int>& edges, double coef = 1.0) {
    std::vector<Term> terms{{x, coef}};
    for (const int e : edges) terms.push_back({edge_var_or_add(cm, e), -1.0});
    cm.model.add_constraint(std::move(terms), Sense::LessEqual, 0.0);
}

void at_least(CompiledModel& cm, const std::vector<VarId>& xs, int k) {
    if (k > 0) add_cardinality(cm.model, xs, Sense::GreaterEqual, k);
}

// The support graph reaches into the question, and an active question node is
// never left dangling.
void touch_question(CompiledModel& cm, const std::vector<std::vector<int>>& adj) {
    const auto qs = nodes_where(*cm.graph, [](const GraphNode& n) { return n.ref.side == Side::Question; });
    at_least(cm, vars_of(cm, qs), 1);
    for (const int n : qs) {
        if (const auto v = cm.node_var(n)) require_support(cm, *v, adj[static_cast<std::size_t>(n)]);
    }
}

// (view, frame) -> predicate node.
std::map<std::pair<ViewKind, int>, int> predicates(const AugmentedGraph& g) {
    std::map<std::pair<ViewKind, int>, int> out;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const auto& n = g.nodes[i];
        if (n.ref.side == Side::Paragraph && is_srl(n.ref.view) && n.frame && n.label == kPredicateLabel) {
            out[{n.ref.view, *n.frame}] = static_cast<int>(i);
        }
    }
    return out;
}

// An argument is active only when its frame's predicate is.
void frame_consistency(CompiledModel& cm, ViewKind view) {
    const auto preds = predicates(*cm.graph);
    for (std::size_t i = 0; i < cm.graph->nodes.size(); ++i) {
        const auto& n = cm.graph->nodes[i];
        if (n.ref.side != Side::Paragraph || n.ref.view != view || !n.frame || n.label == kPredicateLabel) continue;
        const auto it = preds.find({view, *n.frame});
        if (it != preds.end()) {
            add_implication(cm.model, require_node_var(cm, static_cast<int>(i)), require_node_var(cm, it->second));
        }
    }
}

bool is_node(const GraphNode& n, Side side, ViewKind view) { return n.ref.side == side && n.ref.view == view; }

bool is_pred(const GraphNode& n) { return n.label == kPredicateLabel; }

} // namespace

CompiledModel compile_general_body(const QAInstance& instance, std::shared_ptr<const AugmentedGraph> graph,
                                   ReasonerKind kind) {
    CompiledModel cm;
    cm.reasoner = kind;
    cm.graph = std::move(graph);
    const auto& g = *cm.graph;
    cm.node_vars.assign(g.nodes.size(), std::nullopt);
    cm.edge_vars.assign(g.edges.size(), std::nullopt);
    const auto adj = adjacency(g);

    // Declared last option first: the solver's lexicographic tie-break then
    // settles equally good answers on the lowest index.
    const int k = static_cast<int>(instance.answers.size());
    cm.answer_vars.resize(static_cast<std::size_t>(k));
    for (int i = k - 1; i >= 0; --i) {
        cm.answer_vars[static_cast<std::size_t>(i)] = cm.add(Role::Answer, i, "answer_" + std::to_string(i), 0.0);
    }
    for (int i = 0; i < k; ++i) {
        const VarId a = cm.answer_vars[static_cast<std::size_t>(i)];
        const auto chunks =
            nodes_where(g, [&](const GraphNode& n) { return n.ref.side == Side::Answer && n.ref.answer == i; });
        if (chunks.size() == 1) {
            cm.node_vars[static_cast<std::size_t>(chunks[0])] = a;
        } else {
            for (const int c : chunks) {
                const VarId v = cm.add(Role::AnswerChunk, c, node_name(g, c), 0.0);
                cm.node_vars[static_cast<std::size_t>(c)] = v;
                add_implication(cm.model, v, a);
            }
        }
        std::vector<int> incident;
        for (const int c : chunks) {
            for (const int e : adj[static_cast<std::size_t>(c)]) incident.push_back(e);
        }
        std::sort(incident.begin(), incident.end());
        incident.erase(std::unique(incident.begin(), incident.end()), incident.end());
        for (const int e : incident) add_implication(cm.model, edge_var_or_add(cm, e), a);
        require_support(cm, a, incident);
    }
    add_cardinality(cm.model, cm.answer_vars, Sense::Equal, 1);
    return cm;
}

// ------------------------------------------------------------------ combs

namespace {

void compile_comb1(CompiledModel& cm, const QAInstance& instance, const Comb1Config& c) {
    const auto& g = *cm.graph;
    const auto adj = adjacency(g);
    const auto terms = nodes_where(g, [](const GraphNode& n) { return n.ref.side == Side::Question; });
    const auto spans = nodes_where(g, [](const GraphNode& n) { return is_node(n, Side::Paragraph, ViewKind::ShallowParse); });
    const auto mentions =
        nodes_where(g, [](const GraphNode& n) { return is_node(n, Side::Paragraph, ViewKind::Coreference); });
    add_nodes(cm, terms, 0.0);
    add_nodes(cm, spans, 0.0);
    add_nodes(cm, mentions, 0.0);

    cm.sentences = sentence_index(instance.paragraph);
    std::map<int, std::vector<int>> spans_in;
    std::map<int, std::vector<int>> mentions_in;
    for (const int s : spans) spans_in[sentence_of(cm.sentences, g.node(s).span)].push_back(s);
    for (const int m : mentions) mentions_in[sentence_of(cm.sentences, g.node(m).span)].push_back(m);
    for (const auto& [s, members] : spans_in) {
        cm.sentence_vars[s] = cm.add(Role::Sentence, s, "sentence_" + std::to_string(s), c.sentence_weight);
    }

    link_edges(cm);
    touch_question(cm, adj);

    auto alignment_edges = [&](int node) {
        std::vector<int> out;
        for (const int e : adj[static_cast<std::size_t>(node)]) {
            if (g.edges[static_cast<std::size_t>(e)].kind == EdgeKind::Alignment) out.push_back(e);
        }
        return out;
    };
    auto is_question_edge = [&](int e) {
        const auto& edge = g.edges[static_cast<std::size_t>(e)];
        return g.node(edge.from).ref.side == Side::Question || g.node(edge.to).ref.side == Side::Question;
    };

    for (const int s : spans) {
        const VarId v = require_node_var(cm, s);
        add_implication(cm.model, v, cm.sentence_vars.at(sentence_of(cm.sentences, g.node(s).span)));
        require_support(cm, v, alignment_edges(s));
    }
    // A sentence is used only when the question reaches into it, directly or
    // through a coreference link.
    for (const auto& [s, sv] : cm.sentence_vars) {
        std::set<int> incoming;
        for (const int sp : spans_in[s]) {
            for (const int e : adj[static_cast<std::size_t>(sp)]) {
                if (is_question_edge(e)) incoming.insert(e);
            }
        }
        for (const int m : mentions_in[s]) {
            for (const int e : adj[static_cast<std::size_t>(m)]) incoming.insert(e);
        }
        require_support(cm, sv, {incoming.begin(), incoming.end()});
    }
    for (const int m : mentions) {
        std::vector<Term> terms_{{require_node_var(cm, m), 1.0}};
        for (const int s : spans) {
            if (g.node(s).span.overlaps(g.node(m).span)) terms_.push_back({require_node_var(cm, s), -1.0});
        }
        cm.model.add_constraint(std::move(terms_), Sense::LessEqual, 0.0);
    }

    auto penalize = [&](const std::vector<VarId>& xs, const Ladder& ladder, const std::string& what) {
        for (int k = 1; k <= 3; ++k) {
            if (xs.size() > static_cast<std::size_t>(k)) {
                const VarId y = add_count_penalty(cm.model, xs, k, ladder[static_cast<std::size_t>(k - 1)],
                                                  "penalty[" + what + ">" + std::to_string(k) + "]");
                cm.roles.push_back({Role::Penalty, -1});
                (void)y;
            }
        }
    };
    penalize(vars_of(cm, terms), c.question_term_penalties, "question-terms");
    for (const int t : terms) {
        std::vector<VarId> xs;
        for (const int e : adj[static_cast<std::size_t>(t)]) xs.push_back(edge_var_or_add(cm, e));
        penalize(xs, c.term_alignment_penalties, "alignments:" + node_name(g, t));
    }
    for (std::size_t i = 0; i < instance.answers.size(); ++i) {
        const auto chunks = nodes_where(
            g, [&](const GraphNode& n) { return n.ref.side == Side::Answer && n.ref.answer == static_cast<int>(i); });
        if (chunks.size() > 1) penalize(vars_of(cm, chunks), c.answer_chunk_penalties, "chunks:" + std::to_string(i));
        for (const int ch : chunks) {
            std::vector<VarId> xs;
            for (const int e : adj[static_cast<std::size_t>(ch)]) xs.push_back(edge_var_or_add(cm, e));
            penalize(xs, c.chunk_edge_penalties, "chunk-edges:" + node_name(g, ch));
        }
    }

    // Proximity boosts between chunks that can be active at all.
    std::vector<int> alignable;
    for (const int s : spans) {
        if (!alignment_edges(s).empty()) alignable.push_back(s);
    }
    auto boost = [&](int a, int b, double weight, const std::string& what) {
        if (weight == 0.0) return;
        const VarId y = cm.add(Role::Boost, -1, "boost[" + what + "](" + node_name(g, a) + "," + node_name(g, b) + ")",
                               weight);
        const std::vector<VarId> ends{require_node_var(cm, a), require_node_var(cm, b)};
        add_iff_and(cm.model, y, ends);
    };

    if (const View* dep = instance.paragraph.view(ViewKind::Dependency)) {
        std::map<int, std::vector<int>> tree;
        for (const auto& r : dep->relations) {
            tree[r.source].push_back(r.target);
            tree[r.target].push_back(r.source);
        }
        auto tokens_in = [&](int span) {
            std::vector<int> out;
            for (const auto& t : dep->constituents) {
                if (g.node(span).span.contains(t.span)) out.push_back(t.id);
            }
            return out;
        };
        auto within = [&](const std::vector<int>& from, const std::vector<int>& to) {
            std::map<int, int> dist;
            std::deque<int> frontier;
            for (const int t : from) {
                dist[t] = 0;
                frontier.push_back(t);
            }
            while (!frontier.empty()) {
                const int t = frontier.front();
                frontier.pop_front();
                if (std::find(to.begin(), to.end(), t) != to.end()) return true;
                if (dist[t] >= c.dependency_max_distance) continue;
                for (const int u : tree[t]) {
                    if (!dist.contains(u)) {
                        dist[u] = dist[t] + 1;
                        frontier.push_back(u);
                    }
                }
            }
            return false;
        };
        for (std::size_t i = 0; i < alignable.size(); ++i) {
            for (std::size_t j = i + 1; j < alignable.size(); ++j) {
                const auto ta = tokens_in(alignable[i]);
                const auto tb = tokens_in(alignable[j]);
                if (!ta.empty() && !tb.empty() && within(ta, tb)) {
                    boost(alignable[i], alignable[j], c.dependency_boost, "dependency");
                }
            }
        }
    }

    if (const View* tok = instance.paragraph.view(ViewKind::Tokens)) {
        std::vector<CharRange> order;
        for (const auto& t : tok->constituents) order.push_back(t.span);
        std::sort(order.begin(), order.end());
        auto token_range = [&](int span) -> std::pair<int, int> {
            int first = -1;
            int last = -1;
            for (std::size_t i = 0; i < order.size(); ++i) {
                if (order[i].overlaps(g.node(span).span)) {
                    if (first < 0) first = static_cast<int>(i);
                    last = static_cast<int>(i);
                }
            }
            return {first, last};
        };
        for (std::size_t i = 0; i < alignable.size(); ++i) {
            for (std::size_t j = i + 1; j < alignable.size(); ++j) {
                const auto [a0, a1] = token_range(alignable[i]);
                const auto [b0, b1] = token_range(alignable[j]);
                if (a0 < 0 || b0 < 0) continue;
                int gap = 0;
                if (a1 < b0) gap = b0 - a1;
                else if (b1 < a0) gap = a0 - b1;
                else continue;
                for (int k = 1; k <= 3; ++k) {
                    if (gap <= k) {
                        boost(alignable[i], alignable[j], c.distance_boosts[static_cast<std::size_t>(k - 1)],
                              "distance<=" + std::to_string(k));
                    }
                }
            }
        }
    }
}

void compile_comb2(CompiledModel& cm, const Comb2Config& c) {
    const auto& g = *cm.graph;
    const auto adj = adjacency(g);
    const auto qn = nodes_where(g, [](const GraphNode& n) { return is_node(n, Side::Question, ViewKind::VerbSRL); });
    const auto pn = nodes_where(g, [](const GraphNode& n) { return is_node(n, Side::Paragraph, ViewKind::VerbSRL); });
    add_nodes(cm, qn, c.question_node_weight);
    add_nodes(cm, pn, c.paragraph_node_weight);
    link_edges(cm);
    touch_question(cm, adj);

    std::vector<int> qpred;
    std::vector<int> ppred;
    for (const int n : qn) if (is_pred(g.node(n))) qpred.push_back(n);
    for (const int n : pn) if (is_pred(g.node(n))) ppred.push_back(n);
    at_least(cm, vars_of(cm, qn), c.min_question_constituents);
    at_least(cm, vars_of(cm, qpred), c.min_question_predicates);
    add_cardinality(cm.model, vars_of(cm, ppred), Sense::LessEqual, c.max_paragraph_predicates);
    frame_consistency(cm, ViewKind::VerbSRL);
}

void compile_comb3(CompiledModel& cm, const Comb3Config& c) {
    const auto& g = *cm.graph;
    const auto adj = adjacency(g);
    const auto qn = nodes_where(g, [](const GraphNode& n) { return is_node(n, Side::Question, ViewKind::VerbSRL); });
    const auto pn = nodes_where(g, [](const GraphNode& n) { return is_node(n, Side::Paragraph, ViewKind::VerbSRL); });
    const auto mn =
        nodes_where(g, [](const GraphNode& n) { return is_node(n, Side::Paragraph, ViewKind::Coreference); });
    add_nodes(cm, qn, c.question_node_weight);
    add_nodes(cm, pn, c.paragraph_node_weight);
    add_nodes(cm, mn, c.mention_node_weight);

    std::map<int, std::vector<int>> clusters;
    for (const int m : mn) clusters[*g.node(m).frame].push_back(m);
    for (const auto& [cluster, members] : clusters) {
        cm.chain_vars[cluster] = cm.add(Role::Chain, cluster, "chain_" + std::to_string(cluster), c.chain_weight);
    }
    link_edges(cm);
    touch_question(cm, adj);

    std::vector<VarId> chains;
    for (const auto& [cluster, members] : clusters) {
        const VarId chain = cm.chain_vars.at(cluster);
        chains.push_back(chain);
        for (const int m : members) add_implication(cm.model, require_node_var(cm, m), chain);
        std::vector<Term> any{{chain, 1.0}};
        for (const int m : members) any.push_back({require_node_var(cm, m), -1.0});
        cm.model.add_constraint(std::move(any), Sense::LessEqual, 0.0);
        // The chain must be anchored on an active Verb-SRL constituent.
        std::vector<Term> anchor{{chain, 1.0}};
        for (const int v : pn) {
            const bool overlaps = std::any_of(members.begin(), members.end(),
                                              [&](int m) { return g.node(v).span.overlaps(g.node(m).span); });
            if (overlaps) anchor.push_back({require_node_var(cm, v), -1.0});
        }
        cm.model.add_constraint(std::move(anchor), Sense::LessEqual, 0.0);
    }
    add_cardinality(cm.model, chains, Sense::LessEqual, c.max_chains);
    at_least(cm, vars_of(cm, qn), c.min_question_constituents);

    std::vector<int> ppred;
    for (const int n : pn) if (is_pred(g.node(n))) ppred.push_back(n);
    add_cardinality(cm.model, vars_of(cm, ppred), Sense::LessEqual, c.max_paragraph_predicates);
    for (const int n : ppred) {
        require_support(cm, require_node_var(cm, n), adj[static_cast<std::size_t>(n)], c.min_predicate_degree);
    }
    frame_consistency(cm, ViewKind::VerbSRL);
}

void compile_comb5(CompiledModel& cm, const Comb5Config& c) {
    const auto& g = *cm.graph;
    const auto adj = adjacency(g);
    const auto qn = nodes_where(g, [](const GraphNode& n) { return is_node(n, Side::Question, ViewKind::VerbSRL); });
    const auto vn = nodes_where(g, [](const GraphNode& n) { return is_node(n, Side::Paragraph, ViewKind::VerbSRL); });
    const auto pp = nodes_where(g, [](const GraphNode& n) { return is_node(n, Side::Paragraph, ViewKind::PrepSRL); });
    add_nodes(cm, qn, c.question_node_weight);
    add_nodes(cm, vn, c.paragraph_node_weight);
    add_nodes(cm, pp, c.prep_node_weight);
    link_edges(cm);
    touch_question(cm, adj);

    auto family_is = [&](int e, std::string_view f) { return g.edges[static_cast<std::size_t>(e)].family == f; };
    auto other_end = [&](int e, int n) {
        const auto& edge = g.edges[static_cast<std::size_t>(e)];
        return edge.from == n ? edge.to : edge.from;
    };

    std::vector<int> prep_preds;
    std::vector<int> verb_preds;
    std::map<int, std::vector<int>> prep_frames;
    std::map<int, std::vector<int>> verb_frames;
    for (const int n : pp) {
        if (is_pred(g.node(n))) prep_preds.push_back(n);
        else prep_frames[*g.node(n).frame].push_back(n);
    }
    for (const int n : vn) {
        if (is_pred(g.node(n))) verb_preds.push_back(n);
        else verb_frames[*g.node(n).frame].push_back(n);
    }

    // A Prep-SRL argument needs an incoming edge that is not its own frame's.
    for (const auto& [frame, args] : prep_frames) {
        for (const int a : args) {
            std::vector<int> incoming;
            for (const int e : adj[static_cast<std::size_t>(a)]) {
                if (g.edges[static_cast<std::size_t>(e)].kind == EdgeKind::Alignment) incoming.push_back(e);
            }
            require_support(cm, require_node_var(cm, a), incoming);
        }
    }
    // No loops: a Verb-SRL argument reaches a Prep-SRL frame through one argument at most.
    for (const auto& [vframe, vargs] : verb_frames) {
        for (const int v : vargs) {
            for (const auto& [pframe, pargs] : prep_frames) {
                std::vector<VarId> xs;
                for (const int e : adj[static_cast<std::size_t>(v)]) {
                    if (family_is(e, "p-prep-arg~p-verb-arg") &&
                        std::find(pargs.begin(), pargs.end(), other_end(e, v)) != pargs.end()) {
                        xs.push_back(edge_var_or_add(cm, e));
                    }
                }
                if (xs.size() > 1) add_cardinality(cm.model, xs, Sense::LessEqual, 1);
            }
        }
    }
    add_cardinality(cm.model, vars_of(cm, prep_preds), Sense::Equal, 1);
    add_cardinality(cm.model, vars_of(cm, verb_preds), Sense::GreaterEqual, 1);
    add_cardinality(cm.model, vars_of(cm, verb_preds), Sense::LessEqual, 1);
    for (const auto& [frame, args] : verb_frames) {
        std::vector<VarId> xs;
        for (const int a : args) {
            for (const int e : adj[static_cast<std::size_t>(a)]) {
                if (family_is(e, "answer~p-verb-arg")) xs.push_back(edge_var_or_add(cm, e));
            }
        }
        if (xs.size() > 1) add_cardinality(cm.model, xs, Sense::LessEqual, 1);
        for (const int a : args) {
            require_support(cm, require_node_var(cm, a), adj[static_cast<std::size_t>(a)], c.min_verb_argument_degree);
        }
    }
    frame_consistency(cm, ViewKind::VerbSRL);
    frame_consistency(cm, ViewKind::PrepSRL);
}

} // namespace

CompiledModel compile(ReasonerKind kind, const QAInstance& instance, const Config& config,
                      const EmbeddingTable& table, Execution execution) {
    auto graph = std::make_shared<const AugmentedGraph>(
        assemble(instance, recipe_for(kind, config, instance), table, execution));
    CompiledModel cm = compile_general_body(instance, graph, kind);
    switch (kind) {
    case ReasonerKind::Comb1: compile_comb1(cm, instance, config.comb1); break;
    case ReasonerKind::Comb2: compile_comb2(cm, config.comb2); break;
    case ReasonerKind::Comb3: compile_comb3(cm, config.comb3); break;
    case ReasonerKind::Comb5: compile_comb5(cm, config.comb5); break;
    }
    // Alignment scores enter the objective through the section's multiplier.
    const double scale = alignment_weight(config, kind);
    for (std::size_t e = 0; e < cm.edge_vars.size(); ++e) {
        const auto& edge = cm.graph->edges[e];
        if (cm.edge_vars[e] && edge.kind == EdgeKind::Alignment) cm.model.set_objective(*cm.edge_vars[e], scale * edge.weight);
    }
    if (cm.roles.size() != cm.model.num_variables()) {
        throw InternalError("variable roles out of step with the model");
    }
    return cm;
}

// ------------------------------------------------------------------ decode

std::optional<SupportGraph> decode(const CompiledModel& cm, const Solution& solution) {
    if (!solution.optimal()) {
        return std::nullopt;
    }
    const auto& g = *cm.graph;
    SupportGraph sg;
    sg.reasoner = cm.reasoner;
    sg.graph = cm.graph;
    sg.objective = solution.objective;

    for (std::size_t i = 0; i < cm.answer_vars.size(); ++i) {
        if (solution.value(cm.answer_vars[i])) {
            if (sg.answer >= 0) throw InternalError("more than one answer option is active");
            sg.answer = static_cast<int>(i);
        }
    }
    if (sg.answer < 0) throw InternalError("no answer option is active");

    for (std::size_t n = 0; n < g.nodes.size(); ++n) {
        const auto v = cm.node_vars[n];
        if (v && solution.value(*v)) sg.active_nodes.push_back(static_cast<int>(n));
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto v = cm.edge_vars[e];
        if (v && solution.value(*v)) sg.active_edges.push_back(static_cast<int>(e));
    }
    for (const auto& [s, v] : cm.sentence_vars) {
        if (solution.value(v)) sg.active_sentences.push_back(s);
    }
    for (const auto& [c, v] : cm.chain_vars) {
        if (solution.value(v)) sg.active_chains.push_back(c);
    }

    auto active = [&](int n) { return std::binary_search(sg.active_nodes.begin(), sg.active_nodes.end(), n); };
    bool answer_edge = false;
    for (const int e : sg.active_edges) {
        const auto& edge = g.edges[static_cast<std::size_t>(e)];
        if (!active(edge.from) || !active(edge.to)) {
            throw InternalError("active edge " + edge_name(g, e) + " has an inactive endpoint");
        }
        for (const int end : {edge.from, edge.to}) {
            if (g.node(end).ref.side == Side::Answer && g.node(end).ref.answer == sg.answer) answer_edge = true;
        }
    }
    if (!answer_edge) throw InternalError("the chosen answer has no active incident edge");
    bool question = false;
    bool paragraph = false;
    for (const int n : sg.active_nodes) {
        const auto& ref = g.node(n).ref;
        if (ref.side == Side::Answer && ref.answer != sg.answer) {
            throw InternalError("node " + node_name(g, n) + " of an unchosen answer is active");
        }
        question = question || ref.side == Side::Question;
        paragraph = paragraph || ref.side == Side::Paragraph;
    }
    if (!question || !paragraph) throw InternalError("support graph does not reach both question and paragraph");
    return sg;
}

// ------------------------------------------------------------------ answer

ReasonerOutcome run_reasoner(ReasonerKind kind, const QAInstance& instance, const Config& config,
                             const EmbeddingTable& table) {
    ReasonerOutcome out;
    out.reasoner = kind;
    CompiledModel cm;
    try {
        cm = compile(kind, instance, config, table, Execution::Serial);
    } catch (const MissingViewError& e) {
        out.status = OutcomeStatus::Skipped;
        out.note = e.what();
        return out;
    }
    out.variables = cm.model.num_variables();
    out.constraints = cm.model.num_constraints();
    const Solution sol = solve(cm.model, SolverOptions{config.node_budget});
    out.search_nodes = sol.nodes;
    out.support = decode(cm, sol);
    if (!out.support) {
        out.status = OutcomeStatus::Abstained;
        return out;
    }
    out.status = OutcomeStatus::Answered;
    const double denom = cm.model.positive_objective_sum();
    out.confidence = denom > 0.0 ? std::clamp(sol.objective / denom, 0.0, 1.0) : 0.0;
    return out;
}

AnswerDecision answer(const QAInstance& instance, const std::vector<ReasonerKind>& reasoners, const Config& config,
                      const EmbeddingTable& table, Execution execution) {
    const long long n = static_cast<long long>(reasoners.size());
    std::vector<ReasonerOutcome> outcomes(reasoners.size());
    std::vector<std::exception_ptr> errors(reasoners.size());
#pragma omp parallel for schedule(dynamic) if (execution == Execution::Parallel)
    for (long long i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            outcomes[idx] = run_reasoner(reasoners[idx], instance, config, table);
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    AnswerDecision d;
    d.outcomes = std::move(outcomes);
    const ReasonerOutcome* best = nullptr;
    for (const auto& o : d.outcomes) {
        if (o.status != OutcomeStatus::Answered) continue;
        if (!best) {
            best = &o;
            continue;
        }
        const double diff = o.confidence - best->confidence;
        if (diff > kTolerance) {
            best = &o;
        } else if (diff >= -kTolerance) {
            const int po = priority(o.reasoner);
            const int pb = priority(best->reasoner);
            if (po > pb || (po == pb && o.support->answer < best->support->answer)) best = &o;
        }
    }
    if (best) {
        d.answer = best->support->answer;
        d.confidence = best->confidence;
        d.reasoner = best->reasoner;
    }
    return d;
}

} // namespace supportgraph
