#include "supportgraph/checker.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace supportgraph {

namespace {

const AnnotatedText& text_of(const QAInstance& instance, const NodeRef& ref) {
    switch (ref.side) {
    case Side::Question: return instance.question;
    case Side::Answer: return instance.answers.at(static_cast<std::size_t>(ref.answer));
    case Side::Paragraph: return instance.paragraph;
    }
    return instance.question;
}

class Checker {
public:
    Checker(const QAInstance& instance, const SupportGraph& sg, const Config& config, const EmbeddingTable& table)
        : instance_(instance), sg_(sg), g_(*sg.graph), config_(config), table_(table),
          active_(sg.active_nodes.begin(), sg.active_nodes.end()),
          edges_(sg.active_edges.begin(), sg.active_edges.end()) {}

    std::vector<std::string> run() {
        common();
        switch (sg_.reasoner) {
        case ReasonerKind::Comb1: comb1(); break;
        case ReasonerKind::Comb2: comb2(); break;
        case ReasonerKind::Comb3: comb3(); break;
        case ReasonerKind::Comb5: comb5(); break;
        }
        return std::move(errors_);
    }

private:
    void fail(std::string message) { errors_.push_back(std::move(message)); }

    const NodeRef& ref(int n) const { return g_.node(n).ref; }

    // The constituent straight from the instance views; nullptr for a whole-text answer node.
    const Constituent* source(int n) const {
        const auto& r = ref(n);
        if (r.constituent == kWholeText) return nullptr;
        const View* v = text_of(instance_, r).view(r.view);
        return v ? v->find(r.constituent) : nullptr;
    }

    std::string surface(int n) const {
        const Constituent* c = source(n);
        return c ? c->surface : text_of(instance_, ref(n)).text();
    }

    bool is_pred(int n) const {
        const Constituent* c = source(n);
        return c && c->is_predicate();
    }

    std::optional<int> frame(int n) const {
        const Constituent* c = source(n);
        return c ? c->frame : std::nullopt;
    }

    bool on(int n) const { return active_.contains(n); }
    bool edge_on(int e) const { return edges_.contains(e); }

    std::vector<int> active_where(Side side, ViewKind view) const {
        std::vector<int> out;
        for (const int n : active_) {
            if (ref(n).side == side && ref(n).view == view) out.push_back(n);
        }
        return out;
    }

    std::vector<int> active_edges_at(int n) const {
        std::vector<int> out;
        for (const int e : edges_) {
            const auto& edge = g_.edges[static_cast<std::size_t>(e)];
            if (edge.from == n || edge.to == n) out.push_back(e);
        }
        return out;
    }

    int other(int e, int n) const {
        const auto& edge = g_.edges[static_cast<std::size_t>(e)];
        return edge.from == n ? edge.to : edge.from;
    }

    const GraphEdge& edge(int e) const { return g_.edges[static_cast<std::size_t>(e)]; }

    double structural_weight(const std::string& family) const {
        for (const auto& r : g_.recipe.structural) {
            if (r.family == family) return r.weight;
        }
        return std::nan("");
    }

    void common() {
        if (sg_.answer < 0 || static_cast<std::size_t>(sg_.answer) >= instance_.answers.size()) {
            fail("answer index out of range");
            return;
        }
        const Recipe expected = recipe_for(sg_.reasoner, config_, instance_);
        bool question = false;
        bool paragraph = false;
        for (const int n : active_) {
            question = question || ref(n).side == Side::Question;
            paragraph = paragraph || ref(n).side == Side::Paragraph;
            if (ref(n).side == Side::Answer && ref(n).answer != sg_.answer) {
                fail("node " + to_string(ref(n)) + " belongs to an unchosen answer");
            }
            if (ref(n).constituent != kWholeText && !source(n)) {
                fail("node " + to_string(ref(n)) + " is not a constituent of the instance");
            }
        }
        if (!question) fail("no question node is active");
        if (!paragraph) fail("no paragraph node is active");

        bool answer_edge = false;
        for (std::size_t e = 0; e < g_.edges.size(); ++e) {
            const auto& ed = g_.edges[e];
            const bool is_on = edge_on(static_cast<int>(e));
            if (is_on && (!on(ed.from) || !on(ed.to))) {
                fail("active edge with inactive endpoint: " + to_string(ref(ed.from)) + " - " + to_string(ref(ed.to)));
            }
            if (!is_on && on(ed.from) && on(ed.to)) {
                fail("inactive edge between active nodes: " + to_string(ref(ed.from)) + " - " + to_string(ref(ed.to)));
            }
            if (!is_on) continue;
            for (const int end : {ed.from, ed.to}) {
                if (ref(end).side == Side::Answer && ref(end).answer == sg_.answer) answer_edge = true;
            }
            if (ed.kind == EdgeKind::Alignment) {
                const AlignmentRule* rule = expected.alignment_rule(ed.family);
                if (!rule) {
                    fail("alignment edge of unknown family " + ed.family);
                    continue;
                }
                const double s = score(rule->scorer, surface(ed.from), surface(ed.to), table_);
                if (!(s > rule->threshold)) {
                    fail("alignment edge " + ed.family + " scores " + std::to_string(s) + ", not above " +
                         std::to_string(rule->threshold));
                }
                if (std::abs(s - ed.weight) > 1e-12) fail("alignment edge weight differs from its recomputed score");
            } else {
                const auto fa = frame(ed.from);
                const auto fb = frame(ed.to);
                if (!fa || fa != fb || ref(ed.from).view != ref(ed.to).view) {
                    fail("structural edge joins different frames");
                }
                if (!(std::abs(structural_weight(ed.family) - ed.weight) <= 1e-12)) {
                    fail("structural edge " + ed.family + " has an unexpected weight");
                }
            }
        }
        if (!answer_edge) fail("the chosen answer has no active edge");
        for (const int n : active_) {
            if (ref(n).side == Side::Question && active_edges_at(n).empty()) {
                fail("question node " + surface(n) + " has no active edge");
            }
        }
    }

    void frame_consistency(ViewKind view) {
        for (const int n : active_where(Side::Paragraph, view)) {
            if (is_pred(n) || !frame(n)) continue;
            bool pred_on = false;
            for (const int m : active_where(Side::Paragraph, view)) {
                if (is_pred(m) && frame(m) == frame(n)) pred_on = true;
            }
            if (!pred_on) fail("argument " + to_string(ref(n)) + " is active without its predicate");
        }
    }

    int count_preds(Side side, ViewKind view) const {
        int k = 0;
        for (const int n : active_where(side, view)) k += is_pred(n) ? 1 : 0;
        return k;
    }

    void comb1() {
        const auto terms = active_where(Side::Question, ViewKind::Tokens);
        if (terms.empty()) fail("no question term is active");
        for (const int t : terms) {
            if (active_edges_at(t).empty()) fail("question term " + surface(t) + " has no active alignment");
        }
        const auto sentences = sentence_index(instance_.paragraph);
        const std::set<int> on_sentences(sg_.active_sentences.begin(), sg_.active_sentences.end());
        for (const int s : active_where(Side::Paragraph, ViewKind::ShallowParse)) {
            if (!on_sentences.contains(sentence_of(sentences, g_.node(s).span))) {
                fail("chunk " + surface(s) + " lies in an inactive sentence");
            }
            bool aligned = false;
            for (const int e : active_edges_at(s)) aligned = aligned || edge(e).kind == EdgeKind::Alignment;
            if (!aligned) fail("chunk " + surface(s) + " has no active alignment");
        }
        for (const int s : on_sentences) {
            bool reached = false;
            for (const int e : edges_) {
                for (const int end : {edge(e).from, edge(e).to}) {
                    if (ref(end).side != Side::Paragraph || sentence_of(sentences, g_.node(end).span) != s) continue;
                    const int o = other(e, end);
                    if (ref(o).side == Side::Question || ref(end).view == ViewKind::Coreference) reached = true;
                }
            }
            if (!reached) fail("sentence " + std::to_string(s) + " is active without an incoming edge");
        }
    }

    void comb2() {
        const auto& c = config_.comb2;
        const auto qs = active_where(Side::Question, ViewKind::VerbSRL);
        if (static_cast<int>(qs.size()) < c.min_question_constituents) fail("too few question constituents");
        if (count_preds(Side::Question, ViewKind::VerbSRL) < c.min_question_predicates) {
            fail("too few question predicates");
        }
        if (count_preds(Side::Paragraph, ViewKind::VerbSRL) > c.max_paragraph_predicates) {
            fail("too many paragraph predicates");
        }
        frame_consistency(ViewKind::VerbSRL);
    }

    void comb3() {
        const auto& c = config_.comb3;
        std::set<int> chains;
        for (const int m : active_where(Side::Paragraph, ViewKind::Coreference)) chains.insert(*frame(m));
        if (static_cast<int>(chains.size()) > c.max_chains) fail("too many coreference chains");
        for (const int chain : chains) {
            bool anchored = false;
            for (const int v : active_where(Side::Paragraph, ViewKind::VerbSRL)) {
                for (const auto& m : instance_.paragraph.view(ViewKind::Coreference)->constituents) {
                    if (m.frame == chain && m.span.overlaps(g_.node(v).span)) anchored = true;
                }
            }
            if (!anchored) fail("coreference chain " + std::to_string(chain) + " is not anchored on a frame");
        }
        const auto qs = active_where(Side::Question, ViewKind::VerbSRL);
        if (static_cast<int>(qs.size()) < c.min_question_constituents) fail("too few question constituents");
        for (const int n : qs) {
            if (active_edges_at(n).empty()) fail("question constituent " + surface(n) + " has no active edge");
        }
        if (count_preds(Side::Paragraph, ViewKind::VerbSRL) > c.max_paragraph_predicates) {
            fail("too many paragraph predicates");
        }
        for (const int n : active_where(Side::Paragraph, ViewKind::VerbSRL)) {
            if (is_pred(n) && static_cast<int>(active_edges_at(n).size()) < c.min_predicate_degree) {
                fail("predicate " + surface(n) + " has too few active edges");
            }
        }
        frame_consistency(ViewKind::VerbSRL);
    }

    void comb5() {
        const auto& c = config_.comb5;
        if (count_preds(Side::Paragraph, ViewKind::PrepSRL) != 1) fail("need exactly one Prep-SRL predicate");
        if (count_preds(Side::Paragraph, ViewKind::VerbSRL) != 1) fail("need exactly one Verb-SRL predicate");
        std::map<int, int> answer_edges_per_frame;
        for (const int v : active_where(Side::Paragraph, ViewKind::VerbSRL)) {
            if (is_pred(v)) continue;
            const auto at = active_edges_at(v);
            if (static_cast<int>(at.size()) < c.min_verb_argument_degree) {
                fail("Verb-SRL argument " + surface(v) + " has too few active edges");
            }
            std::map<int, int> per_prep_frame;
            for (const int e : at) {
                const int o = other(e, v);
                if (ref(o).side == Side::Answer) ++answer_edges_per_frame[*frame(v)];
                if (ref(o).side == Side::Paragraph && ref(o).view == ViewKind::PrepSRL) ++per_prep_frame[*frame(o)];
            }
            for (const auto& [f, k] : per_prep_frame) {
                if (k > 1) fail("Verb-SRL argument " + surface(v) + " loops through a Prep-SRL frame");
            }
        }
        for (const auto& [f, k] : answer_edges_per_frame) {
            if (k > 1) fail("Verb-SRL frame " + std::to_string(f) + " connects to the answer more than once");
        }
        for (const int p : active_where(Side::Paragraph, ViewKind::PrepSRL)) {
            if (is_pred(p)) continue;
            bool incoming = false;
            for (const int e : active_edges_at(p)) incoming = incoming || edge(e).kind == EdgeKind::Alignment;
            if (!incoming) fail("Prep-SRL argument " + surface(p) + " has no incoming alignment");
        }
        frame_consistency(ViewKind::VerbSRL);
        frame_consistency(ViewKind::PrepSRL);
    }

    const QAInstance& instance_;
    const SupportGraph& sg_;
    const AugmentedGraph& g_;
    const Config& config_;
    const EmbeddingTable& table_;
    std::set<int> active_;
    std::set<int> edges_;
    std::vector<std::string> errors_;
};

} // namespace

std::vector<std::string> check_support_graph(const QAInstance& instance, const SupportGraph& support,
                                             const Config& config, const EmbeddingTable& table) {
    return Checker(instance, support, config, table).run();
}

} // namespace supportgraph
