#include "supportgraph/graph.hpp"

#include <algorithm>
#include <map>

#include "supportgraph/errors.hpp"

namespace supportgraph {

std::string_view to_string(Side side) {
    switch (side) {
    case Side::Question: return "question";
    case Side::Answer: return "answer";
    case Side::Paragraph: return "paragraph";
    }
    return "?";
}

std::string to_string(const NodeRef& ref) {
    std::string out(to_string(ref.side));
    if (ref.side == Side::Answer) {
        out += std::to_string(ref.answer);
    }
    out += ':';
    out += to_string(ref.view);
    out += ':';
    out += ref.constituent == kWholeText ? std::string("whole") : std::to_string(ref.constituent);
    return out;
}

const AlignmentRule* Recipe::alignment_rule(std::string_view family) const {
    for (const auto& rule : alignments) {
        if (rule.family == family) {
            return &rule;
        }
    }
    return nullptr;
}

int AugmentedGraph::index_of(const NodeRef& ref) const {
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), ref,
                                     [](const GraphNode& n, const NodeRef& r) { return n.ref < r; });
    if (it == nodes.end() || it->ref != ref) {
        return -1;
    }
    return static_cast<int>(it - nodes.begin());
}

std::vector<int> AugmentedGraph::incident(int index) const {
    std::vector<int> out;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (edges[e].from == index || edges[e].to == index) {
            out.push_back(static_cast<int>(e));
        }
    }
    return out;
}

namespace {

std::string owner_name(Side side, int answer) {
    if (side == Side::Answer) {
        return "answer " + std::to_string(answer);
    }
    return std::string(to_string(side));
}

bool has_content(std::string_view surface) {
    const auto& stop = Stopwords::builtin();
    for (const auto& w : content_words(surface, stop)) {
        if (!stop.contains(w)) {
            return true;
        }
    }
    return false;
}

bool passes(const Constituent& c, const Selector& selector) {
    switch (selector.filter) {
    case LabelFilter::Any: break;
    case LabelFilter::Predicate:
        if (!c.is_predicate()) return false;
        break;
    case LabelFilter::Argument:
        if (c.is_predicate()) return false;
        break;
    }
    return !selector.content_only || has_content(c.surface);
}

} // namespace

std::vector<GraphNode> select_nodes(const AnnotatedText& text, Side side, int answer, const Selector& selector) {
    std::vector<GraphNode> out;
    if (side == Side::Answer && selector.view == ViewKind::ShallowParse && !text.has(ViewKind::ShallowParse)) {
        GraphNode whole;
        whole.ref = {side, answer, ViewKind::ShallowParse, kWholeText};
        whole.surface = text.text();
        whole.label = "answer";
        whole.span = {0, text.length()};
        out.push_back(std::move(whole));
        return out;
    }
    const View& view = text.require(selector.view, owner_name(side, answer));
    for (const auto& c : view.constituents) {
        if (!passes(c, selector)) {
            continue;
        }
        out.push_back({{side, side == Side::Answer ? answer : -1, selector.view, c.id}, c.surface, c.label, c.frame,
                       c.span});
    }
    return out;
}

std::vector<CandidateEdge> build_alignment_edges(const Endpoint& source, const Endpoint& target, ScorerKind scorer,
                                                 double threshold, const EmbeddingTable& table, std::string family,
                                                 Execution execution) {
    const auto src = select_nodes(*source.text, source.side, source.answer, source.selector);
    const auto dst = select_nodes(*target.text, target.side, target.answer, target.selector);
    std::vector<PreparedPhrase> ps;
    std::vector<PreparedPhrase> pt;
    ps.reserve(src.size());
    pt.reserve(dst.size());
    for (const auto& n : src) ps.push_back(prepare(n.surface, table));
    for (const auto& n : dst) pt.push_back(prepare(n.surface, table));

    const std::size_t m = dst.size();
    const std::size_t total = src.size() * m;
    std::vector<double> scores(total, 0.0);
    if (execution == Execution::Parallel) {
        const long long count = static_cast<long long>(total);
#pragma omp parallel for schedule(static)
        for (long long k = 0; k < count; ++k) {
            const auto i = static_cast<std::size_t>(k) / m;
            const auto j = static_cast<std::size_t>(k) % m;
            scores[static_cast<std::size_t>(k)] = score(scorer, ps[i], pt[j], table);
        }
    } else {
        for (std::size_t i = 0; i < src.size(); ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                scores[i * m + j] = score(scorer, ps[i], pt[j], table);
            }
        }
    }

    std::vector<CandidateEdge> out;
    for (std::size_t i = 0; i < src.size(); ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double s = scores[i * m + j];
            if (s > threshold) {
                out.push_back({src[i].ref, dst[j].ref, EdgeKind::Alignment, s, family});
            }
        }
    }
    return out;
}

std::vector<CandidateEdge> build_structural_edges(const AnnotatedText& text, Side side, int answer,
                                                  const std::vector<StructuralRule>& rules) {
    std::vector<CandidateEdge> out;
    const int a = side == Side::Answer ? answer : -1;
    for (const auto& rule : rules) {
        const View& view = text.require(rule.view, owner_name(side, answer));
        auto ref = [&](int id) { return NodeRef{side, a, rule.view, id}; };
        if (rule.view == ViewKind::Coreference) {
            for (const int cluster : view.frame_ids()) {
                std::vector<int> members;
                for (const auto& c : view.constituents) {
                    if (c.frame == cluster) members.push_back(c.id);
                }
                for (std::size_t i = 0; i < members.size(); ++i) {
                    for (std::size_t j = i + 1; j < members.size(); ++j) {
                        out.push_back({ref(members[i]), ref(members[j]), EdgeKind::Structural, rule.weight,
                                       rule.family});
                    }
                }
            }
        } else {
            for (const auto& r : view.relations) {
                out.push_back({ref(r.source), ref(r.target), EdgeKind::Structural, rule.weight, rule.family});
            }
        }
    }
    return out;
}

namespace {

struct TextRef {
    const AnnotatedText* text;
    Side side;
    int answer;
};

std::vector<TextRef> texts_for(const QAInstance& instance, Side side) {
    switch (side) {
    case Side::Question: return {{&instance.question, side, -1}};
    case Side::Paragraph: return {{&instance.paragraph, side, -1}};
    case Side::Answer: {
        std::vector<TextRef> out;
        for (std::size_t i = 0; i < instance.answers.size(); ++i) {
            out.push_back({&instance.answers[i], side, static_cast<int>(i)});
        }
        return out;
    }
    }
    return {};
}

} // namespace

AugmentedGraph assemble(const QAInstance& instance, const Recipe& recipe, const EmbeddingTable& table,
                        Execution execution) {
    std::map<NodeRef, GraphNode> nodes;
    auto add_nodes = [&](const Selector& selector) {
        for (const auto& t : texts_for(instance, selector.side)) {
            for (auto& n : select_nodes(*t.text, t.side, t.answer, selector)) {
                nodes.emplace(n.ref, std::move(n));
            }
        }
    };
    for (const auto& s : recipe.nodes) add_nodes(s);
    for (const auto& rule : recipe.alignments) {
        add_nodes(rule.source);
        add_nodes(rule.target);
    }
    for (const auto& rule : recipe.structural) add_nodes({rule.side, rule.view});

    std::vector<CandidateEdge> candidates;
    for (const auto& rule : recipe.alignments) {
        for (const auto& s : texts_for(instance, rule.source.side)) {
            for (const auto& t : texts_for(instance, rule.target.side)) {
                auto edges = build_alignment_edges({s.text, s.side, s.answer, rule.source},
                                                   {t.text, t.side, t.answer, rule.target}, rule.scorer,
                                                   rule.threshold, table, rule.family, execution);
                candidates.insert(candidates.end(), edges.begin(), edges.end());
            }
        }
    }
    for (const auto& rule : recipe.structural) {
        for (const auto& t : texts_for(instance, rule.side)) {
            auto edges = build_structural_edges(*t.text, t.side, t.answer, {rule});
            candidates.insert(candidates.end(), edges.begin(), edges.end());
        }
    }

    AugmentedGraph g;
    g.recipe = recipe;
    g.nodes.reserve(nodes.size());
    for (auto& [ref, n] : nodes) g.nodes.push_back(std::move(n));
    for (auto& c : candidates) {
        const int from = g.index_of(c.from);
        const int to = g.index_of(c.to);
        if (from < 0 || to < 0) {
            throw InternalError("edge endpoint " + to_string(from < 0 ? c.from : c.to) + " is not a graph node");
        }
        g.edges.push_back({from, to, c.kind, c.weight, std::move(c.family)});
    }
    return g;
}

nlohmann::json to_json(const AugmentedGraph& graph) {
    using nlohmann::json;
    json nodes = json::array();
    for (const auto& n : graph.nodes) {
        json j{{"ref", to_string(n.ref)},
               {"side", to_string(n.ref.side)},
               {"view", to_string(n.ref.view)},
               {"id", n.ref.constituent},
               {"surface", n.surface},
               {"label", n.label},
               {"start", n.span.start},
               {"end", n.span.end}};
        if (n.ref.side == Side::Answer) j["answer"] = n.ref.answer;
        if (n.frame) j["frame"] = *n.frame;
        nodes.push_back(std::move(j));
    }
    json edges = json::array();
    for (const auto& e : graph.edges) {
        edges.push_back({{"from", e.from},
                         {"to", e.to},
                         {"kind", e.kind == EdgeKind::Alignment ? "alignment" : "structural"},
                         {"weight", e.weight},
                         {"family", e.family}});
    }
    return json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

} // namespace supportgraph
