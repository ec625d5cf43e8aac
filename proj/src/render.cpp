#include "supportgraph/render.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace supportgraph {

using nlohmann::json;

namespace {

std::string escape(std::string_view s) {
    std::string out;
    for (const char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out;
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

json node_json(const AugmentedGraph& g, int n) {
    const auto& node = g.node(n);
    return json{{"ref", to_string(node.ref)}, {"surface", node.surface}, {"label", node.label}};
}

std::string render_dot(const AugmentedGraph& g, const std::vector<int>& nodes_on, const std::vector<int>& edges_on) {
    auto on = [](const std::vector<int>& xs, int x) { return std::find(xs.begin(), xs.end(), x) != xs.end(); };
    std::ostringstream out;
    out << "digraph support {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=box, fontsize=10];\n";
    struct Cluster {
        const char* id;
        const char* label;
        const char* color;
        Side side;
    };
    const Cluster clusters[] = {{"cluster_question", "Question", "blue", Side::Question},
                                {"cluster_answers", "Answers", "green", Side::Answer},
                                {"cluster_paragraph", "Paragraph", "yellow", Side::Paragraph}};
    for (const auto& c : clusters) {
        out << "  subgraph " << c.id << " {\n";
        out << "    label=\"" << c.label << "\";\n";
        out << "    color=" << c.color << ";\n";
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            const auto& n = g.nodes[i];
            if (n.ref.side != c.side) continue;
            std::string label = std::string(to_string(n.ref.view)) + ": " + n.surface;
            if (n.ref.side == Side::Answer) label = "[" + std::to_string(n.ref.answer) + "] " + label;
            out << "    n" << i << " [label=\"" << escape(label) << "\"";
            if (on(nodes_on, static_cast<int>(i))) out << ", color=red, fontcolor=red";
            out << "];\n";
        }
        out << "  }\n";
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto& edge = g.edges[e];
        out << "  n" << edge.from << " -> n" << edge.to << " [label=\"" << escape(edge.family) << " "
            << fixed(edge.weight) << "\"";
        if (edge.kind == EdgeKind::Structural) out << ", style=dashed";
        out << (on(edges_on, static_cast<int>(e)) ? ", color=red" : ", color=gray") << "];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace

json to_json(const SupportGraph& s) {
    const auto& g = *s.graph;
    json nodes = json::array();
    for (const int n : s.active_nodes) nodes.push_back(node_json(g, n));
    json edges = json::array();
    for (const int e : s.active_edges) {
        const auto& edge = g.edges[static_cast<std::size_t>(e)];
        edges.push_back({{"from", to_string(g.node(edge.from).ref)},
                         {"to", to_string(g.node(edge.to).ref)},
                         {"kind", edge.kind == EdgeKind::Alignment ? "alignment" : "structural"},
                         {"family", edge.family},
                         {"weight", edge.weight}});
    }
    return json{{"reasoner", to_string(s.reasoner)}, {"answer", s.answer},       {"objective", s.objective},
                {"nodes", std::move(nodes)},        {"edges", std::move(edges)}, {"sentences", s.active_sentences},
                {"chains", s.active_chains}};
}

json to_json(const AnswerDecision& d, const QAInstance& instance) {
    json reasoners = json::array();
    for (const auto& o : d.outcomes) {
        json r{{"reasoner", to_string(o.reasoner)},
               {"status", to_string(o.status)},
               {"confidence", o.confidence},
               {"variables", o.variables},
               {"constraints", o.constraints},
               {"search_nodes", o.search_nodes}};
        if (o.support) {
            r["answer"] = o.support->answer;
            r["objective"] = o.support->objective;
        }
        if (!o.note.empty()) r["note"] = o.note;
        reasoners.push_back(std::move(r));
    }
    json out{{"answer", d.answer},
             {"answer_text", instance.answers.at(static_cast<std::size_t>(d.answer)).text()},
             {"confidence", d.confidence},
             {"reasoner", d.reasoner ? json(std::string(to_string(*d.reasoner))) : json(nullptr)},
             {"reasoners", std::move(reasoners)}};
    if (const auto* s = d.support()) out["support"] = to_json(*s);
    return out;
}

std::string to_text(const AnswerDecision& d, const QAInstance& instance) {
    std::ostringstream out;
    out << "question:   " << instance.question.text() << "\n";
    out << "answer:     [" << d.answer << "] " << instance.answers.at(static_cast<std::size_t>(d.answer)).text()
        << "\n";
    out << "confidence: " << fixed(d.confidence) << "\n";
    out << "reasoner:   " << (d.reasoner ? std::string(to_string(*d.reasoner)) : std::string("none (abstained)"))
        << "\n";
    for (const auto& o : d.outcomes) {
        out << "  " << to_string(o.reasoner) << ": " << to_string(o.status);
        if (o.support) out << " answer=" << o.support->answer << " confidence=" << fixed(o.confidence);
        if (!o.note.empty()) out << " (" << o.note << ")";
        out << "\n";
    }
    if (const auto* s = d.support()) {
        const auto& g = *s->graph;
        out << "support:\n";
        for (const int e : s->active_edges) {
            const auto& edge = g.edges[static_cast<std::size_t>(e)];
            out << "  " << g.node(edge.from).surface << " -- " << g.node(edge.to).surface << "  (" << edge.family
                << " " << fixed(edge.weight) << ")\n";
        }
    }
    return out.str();
}

std::string to_dot(const SupportGraph& support) {
    return render_dot(*support.graph, support.active_nodes, support.active_edges);
}

std::string to_dot(const AugmentedGraph& graph) { return render_dot(graph, {}, {}); }

} // namespace supportgraph
