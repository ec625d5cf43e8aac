#ifndef SUPPORTGRAPH_TESTS_DOT_PARSER_HPP
#define SUPPORTGRAPH_TESTS_DOT_PARSER_HPP

// Recursive-descent reader for the subset of the DOT language:
//
//   graph     : 'digraph' ID '{' stmt* '}'
//   stmt      : (ID '=' ID | attr_stmt | edge_stmt | node_stmt | subgraph) ';'?
//   attr_stmt : ('graph' | 'node' | 'edge') attr_list
//   edge_stmt : ID '->' ID attr_list?
//   node_stmt : ID attr_list?
//   subgraph  : 'subgraph' ID '{' stmt* '}'
//   attr_list : '[' (ID '=' ID (',' | ';')?)* ']'
//
// ID is an identifier, a numeral or a double-quoted string. Anything outside
// the grammar throws std::runtime_error with the offending offset.

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dot {

using Attrs = std::map<std::string, std::string>;

struct Node {
    std::string id;
    std::string cluster;  // enclosing subgraph, empty at top level
    Attrs attrs;
};

struct Edge {
    std::string from;
    std::string to;
    Attrs attrs;
};

struct Graph {
    std::string name;
    std::vector<std::string> clusters;
    std::map<std::string, Attrs> cluster_attrs;
    std::vector<Node> nodes;
    std::vector<Edge> edges;

    const Node* node(const std::string& id) const {
        for (const auto& n : nodes) {
            if (n.id == id) return &n;
        }
        return nullptr;
    }
};

class Parser {
public:
    explicit Parser(std::string src) : s_(std::move(src)) {}

    Graph parse() {
        Graph g;
        expect_keyword("digraph");
        g.name = id();
        expect("{");
        stmts(g, "");
        expect("}");
        skip();
        if (pos_ != s_.size()) fail("trailing input");
        return g;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error("dot: " + what + " at offset " + std::to_string(pos_));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool peek(const std::string& tok) {
        skip();
        return s_.compare(pos_, tok.size(), tok) == 0;
    }

    void expect(const std::string& tok) {
        if (!peek(tok)) fail("expected '" + tok + "'");
        pos_ += tok.size();
    }

    bool peek_keyword(const std::string& kw) {
        if (!peek(kw)) return false;
        const std::size_t after = pos_ + kw.size();
        return after >= s_.size() || !(std::isalnum(static_cast<unsigned char>(s_[after])) || s_[after] == '_');
    }

    void expect_keyword(const std::string& kw) {
        if (!peek_keyword(kw)) fail("expected keyword " + kw);
        pos_ += kw.size();
    }

    std::string id() {
        skip();
        if (pos_ >= s_.size()) fail("expected an ID");
        const char c = s_[pos_];
        if (c == '"') {
            std::string out;
            ++pos_;
            while (pos_ < s_.size() && s_[pos_] != '"') {
                if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) {
                    out += s_[pos_ + 1];
                    pos_ += 2;
                    continue;
                }
                if (s_[pos_] == '\n') fail("newline in string");
                out += s_[pos_++];
            }
            if (pos_ >= s_.size()) fail("unterminated string");
            ++pos_;
            return out;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t b = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            return s_.substr(b, pos_ - b);
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.') {
            const std::size_t b = pos_;
            if (s_[pos_] == '-') ++pos_;
            bool digits = false;
            while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
                digits = true;
                ++pos_;
            }
            if (!digits) fail("bad numeral");
            return s_.substr(b, pos_ - b);
        }
        fail("expected an ID");
    }

    Attrs attr_list() {
        Attrs a;
        expect("[");
        while (!peek("]")) {
            const std::string k = id();
            expect("=");
            a[k] = id();
            if (peek(",") || peek(";")) ++pos_;
        }
        expect("]");
        return a;
    }

    void stmts(Graph& g, const std::string& cluster) {
        while (!peek("}")) {
            if (pos_ >= s_.size()) fail("unexpected end");
            stmt(g, cluster);
            if (peek(";")) ++pos_;
        }
    }

    void stmt(Graph& g, const std::string& cluster) {
        if (peek_keyword("subgraph")) {
            expect_keyword("subgraph");
            const std::string name = id();
            g.clusters.push_back(name);
            expect("{");
            subgraph_body(g, name);
            expect("}");
            return;
        }
        if (peek_keyword("graph") || peek_keyword("node") || peek_keyword("edge")) {
            id();
            attr_list();
            return;
        }
        const std::string first = id();
        if (peek("=")) {
            expect("=");
            const std::string v = id();
            if (!cluster.empty()) g.cluster_attrs[cluster][first] = v;
            return;
        }
        if (peek("->")) {
            expect("->");
            Edge e{first, id(), {}};
            if (peek("[")) e.attrs = attr_list();
            g.edges.push_back(std::move(e));
            return;
        }
        Node n{first, cluster, {}};
        if (peek("[")) n.attrs = attr_list();
        g.nodes.push_back(std::move(n));
    }

    void subgraph_body(Graph& g, const std::string& name) { stmts(g, name); }

    std::string s_;
    std::size_t pos_ = 0;
};

inline Graph parse(const std::string& src) { return Parser(src).parse(); }

} // namespace dot

#endif
