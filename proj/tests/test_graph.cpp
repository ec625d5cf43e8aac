#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "oracles.hpp"
#include "support.hpp"
#include "supportgraph/errors.hpp"
#include "supportgraph/graph.hpp"
#include "supportgraph/reasoners.hpp"

using namespace supportgraph;

namespace {

Constituent con(int id, std::size_t a, std::size_t b, std::string label, std::optional<int> frame = std::nullopt) {
    Constituent c;
    c.id = id;
    c.span = {a, b};
    c.label = std::move(label);
    c.frame = frame;
    return c;
}

// "Chelsea purchase" with a verb frame; "the acquisition" with a nominal one.
AnnotatedText question_text() {
    View v{ViewKind::VerbSRL, {con(0, 8, 16, "Predicate", 0), con(1, 0, 7, "ARG0", 0)}, {}};
    return AnnotatedText::build("Chelsea purchase", {v});
}

AnnotatedText nominal_text() {
    View v{ViewKind::NomSRL, {con(0, 4, 15, "Predicate", 0), con(1, 19, 26, "ARG0", 0)}, {}};
    return AnnotatedText::build("the acquisition by Chelsea", {v});
}

EmbeddingTable two_dim() {
    std::istringstream in("purchase 1 0\nacquisition 0.9 0.1\nchelsea 0 1\n");
    return read_embeddings(in);
}

Endpoint ep(const AnnotatedText& t, Side side, ViewKind view, LabelFilter f) {
    return Endpoint{&t, side, -1, Selector{side, view, f, false}};
}

} // namespace

TEST_SUITE("graph") {

TEST_CASE("predicate to nominal predicate alignment") {
    const AnnotatedText q = question_text();
    const AnnotatedText p = nominal_text();
    const EmbeddingTable t = two_dim();
    const auto edges = build_alignment_edges(ep(q, Side::Question, ViewKind::VerbSRL, LabelFilter::Predicate),
                                             ep(p, Side::Paragraph, ViewKind::NomSRL, LabelFilter::Predicate),
                                             ScorerKind::Entailment, 0.6, t);
    REQUIRE(edges.size() == 1);
    CHECK(edges[0].weight == doctest::Approx(0.9939).epsilon(1e-4));
    CHECK(edges[0].kind == EdgeKind::Alignment);
    CHECK(edges[0].from == NodeRef{Side::Question, -1, ViewKind::VerbSRL, 0});
    CHECK(edges[0].to == NodeRef{Side::Paragraph, -1, ViewKind::NomSRL, 0});
}

TEST_CASE("a score equal to the threshold makes no edge") {
    const AnnotatedText q = question_text();
    const AnnotatedText p = nominal_text();
    const EmbeddingTable t = two_dim();
    const double s = entailment_score("purchase", "acquisition", t);
    const auto src = ep(q, Side::Question, ViewKind::VerbSRL, LabelFilter::Predicate);
    const auto dst = ep(p, Side::Paragraph, ViewKind::NomSRL, LabelFilter::Predicate);
    CHECK(build_alignment_edges(src, dst, ScorerKind::Entailment, s, t).empty());
    CHECK(build_alignment_edges(src, dst, ScorerKind::Entailment, std::nextafter(s, 0.0), t).size() == 1);
}

TEST_CASE("empty selections make no edges") {
    const AnnotatedText q = question_text();
    const AnnotatedText tokens = AnnotatedText::build("Chelsea", {View{ViewKind::Tokens, {con(0, 0, 7, "TOKEN")}, {}}});
    const auto src = ep(q, Side::Question, ViewKind::VerbSRL, LabelFilter::Argument);
    const auto dst = ep(tokens, Side::Paragraph, ViewKind::Tokens, LabelFilter::Predicate);
    CHECK(build_alignment_edges(src, dst, ScorerKind::Entailment, 0.0, sgtest::table()).empty());
}

TEST_CASE("structural edges") {
    const QAInstance inst = sgtest::load("morata_full.json");

    SUBCASE("a frame with a predicate and two arguments") {
        const View* v = inst.paragraph.view(ViewKind::VerbSRL);
        // Frame 1 is "Chelsea purchased Morata".
        View one{ViewKind::VerbSRL, {}, {}};
        for (const auto& c : v->constituents) {
            if (c.frame == 1) one.constituents.push_back(c);
        }
        REQUIRE(one.constituents.size() == 3);
        const AnnotatedText t = AnnotatedText::build(inst.paragraph.text(), {one});
        const auto edges = build_structural_edges(t, Side::Paragraph, -1,
                                                  {{"p-frame", Side::Paragraph, ViewKind::VerbSRL, 0.01}});
        REQUIRE(edges.size() == 2);
        for (const auto& e : edges) {
            CHECK(e.weight == 0.01);
            CHECK(e.kind == EdgeKind::Structural);
            CHECK(e.family == "p-frame");
        }
    }
    SUBCASE("a cluster of three mentions gives every pair") {
        View coref{ViewKind::Coreference,
                   {con(0, 0, 7, "MENTION", 0), con(1, 12, 20, "MENTION", 0), con(2, 25, 28, "MENTION", 0)},
                   {}};
        const AnnotatedText t = AnnotatedText::build("Chelsea and the team and its fans", {coref});
        const auto edges = build_structural_edges(t, Side::Paragraph, -1,
                                                  {{"p-chain", Side::Paragraph, ViewKind::Coreference, 0.02}});
        REQUIRE(edges.size() == 3);
        for (const auto& e : edges) CHECK(e.weight == 0.02);
        CHECK(edges[0].from.constituent == 0);
        CHECK(edges[0].to.constituent == 1);
        CHECK(edges[2].from.constituent == 1);
        CHECK(edges[2].to.constituent == 2);
    }
    SUBCASE("dependency tree edges") {
        const auto edges = build_structural_edges(inst.paragraph, Side::Paragraph, -1,
                                                  {{"p-dep", Side::Paragraph, ViewKind::Dependency, 0.0}});
        // One edge per token minus one root per sentence.
        CHECK(edges.size() == inst.paragraph.view(ViewKind::Dependency)->constituents.size() - 3);
    }
    SUBCASE("a view with no frames") {
        const AnnotatedText t = AnnotatedText::build("Chelsea", {View{ViewKind::VerbSRL, {}, {}}});
        CHECK(build_structural_edges(t, Side::Paragraph, -1, {{"p-frame", Side::Paragraph, ViewKind::VerbSRL, 0.01}})
                  .empty());
    }
}

TEST_CASE("Comb-2 graph on the full fixture") {
    const QAInstance inst = sgtest::load("morata_full.json");
    const AugmentedGraph g = assemble(inst, recipe_for(ReasonerKind::Comb2, Config{}, inst), sgtest::table());
    std::vector<std::string> question;
    for (const auto& n : g.nodes) {
        if (n.ref.side == Side::Question) {
            CHECK(n.ref.view == ViewKind::VerbSRL);
            CHECK(n.frame == 0);
            question.push_back(n.surface);
        }
    }
    CHECK(question == std::vector<std::string>{"purchase", "Who", "Chelsea", "this season"});
    // Both "purchased" predicates align with "purchase".
    int pred_edges = 0;
    for (const auto& e : g.edges) {
        if (e.family == "q-pred~p-pred") {
            ++pred_edges;
            CHECK(g.node(e.to).surface == "purchased");
        }
    }
    CHECK(pred_edges == 2);
}

TEST_CASE("graph invariants") {
    const QAInstance inst = sgtest::load("morata_full.json");
    const Config config;
    for (const ReasonerKind k : kAllReasoners) {
        const Recipe r = recipe_for(k, config, inst);
        const AugmentedGraph g = assemble(inst, r, sgtest::table());
        CAPTURE(to_string(k));
        CHECK(std::is_sorted(g.nodes.begin(), g.nodes.end(),
                             [](const GraphNode& a, const GraphNode& b) { return a.ref < b.ref; }));
        for (std::size_t i = 0; i < g.nodes.size(); ++i) CHECK(g.index_of(g.nodes[i].ref) == static_cast<int>(i));
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            const auto& edge = g.edges[e];
            CHECK(edge.from != edge.to);
            const auto inc = g.incident(edge.from);
            CHECK(std::find(inc.begin(), inc.end(), static_cast<int>(e)) != inc.end());
            if (edge.kind == EdgeKind::Alignment) {
                const AlignmentRule* rule = r.alignment_rule(edge.family);
                REQUIRE(rule);
                CHECK(edge.weight > rule->threshold);
                CHECK(edge.weight <= 1.0);
            }
        }
        // Every answer option is a node.
        for (std::size_t a = 0; a < inst.answers.size(); ++a) {
            bool found = false;
            for (const auto& n : g.nodes) found = found || (n.ref.side == Side::Answer && n.ref.answer == static_cast<int>(a));
            CHECK(found);
        }
    }
}

TEST_CASE("edge weights agree with the independent scorer") {
    const oracle::Vectors raw = oracle::read_vectors(sgtest::fixture("embeddings.txt").string(),
                                                     SUPPORTGRAPH_STOPWORDS_FILE);
    const QAInstance inst = sgtest::load("morata_full.json");
    for (const ReasonerKind k : kAllReasoners) {
        const Recipe r = recipe_for(k, Config{}, inst);
        const AugmentedGraph g = assemble(inst, r, sgtest::table());
        for (const auto& e : g.edges) {
            if (e.kind != EdgeKind::Alignment) continue;
            const AlignmentRule* rule = r.alignment_rule(e.family);
            const std::string& a = g.node(e.from).surface;
            const std::string& b = g.node(e.to).surface;
            double want = 0.0;
            switch (rule->scorer) {
            case ScorerKind::Entailment: want = oracle::entailment(raw, a, b); break;
            case ScorerKind::PhraseSim: want = oracle::phrase_sim(raw, a, b); break;
            case ScorerKind::Symmetric: want = oracle::symmetric(raw, a, b); break;
            }
            CAPTURE(a);
            CAPTURE(b);
            CHECK(e.weight == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("serial and parallel edge construction agree") {
    const QAInstance inst = sgtest::load("morata_full.json");
    for (const ReasonerKind k : kAllReasoners) {
        const Recipe r = recipe_for(k, Config{}, inst);
        const AugmentedGraph a = assemble(inst, r, sgtest::table(), Execution::Serial);
        const AugmentedGraph b = assemble(inst, r, sgtest::table(), Execution::Parallel);
        CHECK(to_json(a) == to_json(b));
    }
    const auto src = Endpoint{&inst.paragraph, Side::Paragraph, -1, Selector{Side::Paragraph, ViewKind::ShallowParse}};
    const auto dst = Endpoint{&inst.paragraph, Side::Paragraph, -1, Selector{Side::Paragraph, ViewKind::VerbSRL}};
    for (const ScorerKind s : {ScorerKind::Entailment, ScorerKind::PhraseSim, ScorerKind::Symmetric}) {
        const auto a = build_alignment_edges(src, dst, s, 0.1, sgtest::table(), "x", Execution::Serial);
        const auto b = build_alignment_edges(src, dst, s, 0.1, sgtest::table(), "x", Execution::Parallel);
        REQUIRE(a.size() == b.size());
        CHECK(!a.empty());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].from == b[i].from);
            CHECK(a[i].to == b[i].to);
            CHECK(a[i].weight == b[i].weight);
        }
    }
}

TEST_CASE("symmetric scorers give the same edges in both directions") {
    const QAInstance inst = sgtest::load("morata_full.json");
    const auto chunks = Endpoint{&inst.paragraph, Side::Paragraph, -1, Selector{Side::Paragraph, ViewKind::ShallowParse}};
    const auto verbs = Endpoint{&inst.paragraph, Side::Paragraph, -1, Selector{Side::Paragraph, ViewKind::VerbSRL}};
    for (const ScorerKind s : {ScorerKind::PhraseSim, ScorerKind::Symmetric}) {
        const auto ab = build_alignment_edges(chunks, verbs, s, 0.3, sgtest::table());
        const auto ba = build_alignment_edges(verbs, chunks, s, 0.3, sgtest::table());
        REQUIRE(ab.size() == ba.size());
        std::vector<std::tuple<NodeRef, NodeRef, double>> x;
        std::vector<std::tuple<NodeRef, NodeRef, double>> y;
        for (const auto& e : ab) x.emplace_back(e.from, e.to, e.weight);
        for (const auto& e : ba) y.emplace_back(e.to, e.from, e.weight);
        std::sort(x.begin(), x.end());
        std::sort(y.begin(), y.end());
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(std::get<0>(x[i]) == std::get<0>(y[i]));
            CHECK(std::get<1>(x[i]) == std::get<1>(y[i]));
            CHECK(std::get<2>(x[i]) == doctest::Approx(std::get<2>(y[i])).epsilon(1e-12));
        }
    }
}

TEST_CASE("a recipe without rules gives nodes and no edges") {
    const QAInstance inst = sgtest::load("morata_a_simple.json");
    Recipe r;
    r.nodes = {Selector{Side::Question, ViewKind::Tokens}, Selector{Side::Paragraph, ViewKind::ShallowParse},
               Selector{Side::Answer, ViewKind::ShallowParse}};
    const AugmentedGraph g = assemble(inst, r, sgtest::table());
    CHECK(g.edges.empty());
    CHECK(g.nodes.size() == inst.question.view(ViewKind::Tokens)->constituents.size() +
                                inst.paragraph.view(ViewKind::ShallowParse)->constituents.size() + 3);
}

TEST_CASE("missing views") {
    const QAInstance inst = sgtest::load("morata_a_simple.json");
    CHECK_THROWS_AS(assemble(inst, recipe_for(ReasonerKind::Comb5, Config{}, inst), sgtest::table()),
                    MissingViewError);
    CHECK_THROWS_AS(assemble(inst, recipe_for(ReasonerKind::Comb3, Config{}, inst), sgtest::table()),
                    MissingViewError);
    try {
        assemble(inst, recipe_for(ReasonerKind::Comb5, Config{}, inst), sgtest::table());
    } catch (const MissingViewError& e) {
        CHECK(std::string(e.what()).find("PrepSRL") != std::string::npos);
    }
}

TEST_CASE("answers without chunks become whole-text nodes") {
    QAInstance inst = sgtest::load("micro_comb2.json");
    inst.answers[1] = AnnotatedText::build("Neymar", {});
    const auto nodes = select_nodes(inst.answers[1], Side::Answer, 1, Selector{Side::Answer, ViewKind::ShallowParse});
    REQUIRE(nodes.size() == 1);
    CHECK(nodes[0].ref.constituent == kWholeText);
    CHECK(nodes[0].surface == "Neymar");
}

TEST_CASE("content-only selectors skip stopword tokens") {
    const QAInstance inst = sgtest::load("morata_a_simple.json");
    const auto nodes =
        select_nodes(inst.question, Side::Question, -1, Selector{Side::Question, ViewKind::Tokens, LabelFilter::Any, true});
    std::vector<std::string> words;
    for (const auto& n : nodes) words.push_back(n.surface);
    CHECK(words == std::vector<std::string>{"Chelsea", "purchase", "season"});
}

}
