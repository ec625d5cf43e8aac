#ifndef SUPPORTGRAPH_TESTS_ORACLES_HPP
#define SUPPORTGRAPH_TESTS_ORACLES_HPP

// Reference implementations that share no code with the library. They are
// slow and simple on purpose; tests compare library output against them.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "supportgraph/ilp.hpp"

namespace oracle {

// ------------------------------------------------------------------ ILP

struct Best {
    bool feasible = false;
    double value = 0.0;
    std::vector<std::uint8_t> bits;
};

inline bool satisfies(const supportgraph::IlpModel& m, const std::vector<std::uint8_t>& x) {
    for (const auto& c : m.constraints()) {
        double lhs = 0.0;
        for (const auto& t : c.terms) lhs += x[static_cast<std::size_t>(t.var.value)] ? t.coef : 0.0;
        if (c.sense == supportgraph::Sense::LessEqual && lhs > c.bound + 1e-9) return false;
        if (c.sense == supportgraph::Sense::GreaterEqual && lhs < c.bound - 1e-9) return false;
        if (c.sense == supportgraph::Sense::Equal && std::abs(lhs - c.bound) > 1e-9) return false;
    }
    return true;
}

inline double value(const supportgraph::IlpModel& m, const std::vector<std::uint8_t>& x) {
    double v = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) v += x[j] ? m.variables()[j].objective : 0.0;
    return v;
}

// Counts up through the 2^n bit strings with variable 0 as the most
// significant bit, which is lexicographic order; keeps the first strict
// improvement.
inline Best brute_force(const supportgraph::IlpModel& m) {
    const std::size_t n = m.num_variables();
    Best best;
    std::vector<std::uint8_t> x(n, 0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        for (std::size_t j = 0; j < n; ++j) x[j] = static_cast<std::uint8_t>((mask >> (n - 1 - j)) & 1U);
        if (!satisfies(m, x)) continue;
        const double v = value(m, x);
        if (!best.feasible || v > best.value + 1e-9) best = {true, v, x};
    }
    return best;
}

// Coefficients in [-1, 1]. With `dyadic` set they are multiples of 1/8, which
// makes sums exact and ties between assignments common.
inline supportgraph::IlpModel random_model(std::mt19937_64& rng, std::size_t max_vars, std::size_t max_cons,
                                           bool dyadic) {
    std::uniform_int_distribution<std::size_t> nv(1, max_vars);
    std::uniform_int_distribution<std::size_t> nc(0, max_cons);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_int_distribution<int> eighth(-8, 8);
    std::uniform_int_distribution<int> sense(0, 5);
    auto draw = [&] { return dyadic ? eighth(rng) / 8.0 : coef(rng); };

    supportgraph::IlpModel m;
    const std::size_t n = nv(rng);
    for (std::size_t j = 0; j < n; ++j) m.add_variable("x" + std::to_string(j), draw());
    const std::size_t k = nc(rng);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<std::size_t> width(1, std::min<std::size_t>(n, 6));
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<supportgraph::Term> terms;
        const std::size_t w = width(rng);
        for (std::size_t t = 0; t < w; ++t) terms.push_back({supportgraph::VarId{static_cast<int>(pick(rng))}, draw()});
        const int s = sense(rng);
        // Mostly <=, which keeps a good share of models feasible.
        const auto sn = s < 4 ? supportgraph::Sense::LessEqual
                              : (s == 4 ? supportgraph::Sense::GreaterEqual : supportgraph::Sense::Equal);
        double bound = draw();
        if (sn == supportgraph::Sense::Equal) bound = 0.0;
        // Most packing rows admit the all-zero point, so a fair share of models stay feasible.
        if (s < 3) bound = std::abs(bound);
        m.add_constraint(std::move(terms), sn, bound);
    }
    return m;
}

// ------------------------------------------------------------------ similarity

struct Vectors {
    std::map<std::string, std::vector<double>> rows;
    std::set<std::string> stopwords;
};

inline Vectors read_vectors(const std::string& embeddings, const std::string& stopwords) {
    Vectors v;
    std::ifstream in(embeddings);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string word;
        row >> word;
        if (word.empty()) continue;
        std::vector<double> xs;
        double x = 0.0;
        while (row >> x) xs.push_back(x);
        v.rows.emplace(word, xs);
    }
    std::ifstream sw(stopwords);
    while (std::getline(sw, line)) {
        if (!line.empty() && line[0] != '#') v.stopwords.insert(line);
    }
    return v;
}

inline std::vector<std::string> words(const Vectors& v, const std::string& phrase) {
    std::vector<std::string> all;
    std::string cur;
    for (const char ch : phrase + " ") {
        if (std::isalnum(static_cast<unsigned char>(ch))) {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        } else if (!cur.empty()) {
            all.push_back(cur);
            cur.clear();
        }
    }
    std::vector<std::string> content;
    for (const auto& w : all) {
        if (!v.stopwords.contains(w)) content.push_back(w);
    }
    return content.empty() ? all : content;
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / std::sqrt(na * nb);
}

inline double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

inline double entailment(const Vectors& v, const std::string& hypothesis, const std::string& premise) {
    const auto h = words(v, hypothesis);
    const auto p = words(v, premise);
    if (h.empty() || p.empty()) return 0.0;
    double total = 0.0;
    for (const auto& hw : h) {
        double best = 0.0;
        for (const auto& pw : p) {
            if (hw == pw) {
                best = 1.0;
                break;
            }
            const auto a = v.rows.find(hw);
            const auto b = v.rows.find(pw);
            if (a != v.rows.end() && b != v.rows.end()) best = std::max(best, clamp01(cosine(a->second, b->second)));
        }
        total += best;
    }
    return total / static_cast<double>(h.size());
}

inline double phrase_sim(const Vectors& v, const std::string& a, const std::string& b) {
    const auto wa = words(v, a);
    const auto wb = words(v, b);
    if (wa.empty() || wb.empty()) return 0.0;
    if (wa == wb) return 1.0;
    auto mean = [&](const std::vector<std::string>& ws) {
        std::vector<double> m;
        int k = 0;
        for (const auto& w : ws) {
            const auto it = v.rows.find(w);
            if (it == v.rows.end()) continue;
            if (m.empty()) m.assign(it->second.size(), 0.0);
            for (std::size_t i = 0; i < m.size(); ++i) m[i] += it->second[i];
            ++k;
        }
        for (auto& x : m) x /= std::max(k, 1);
        return m;
    };
    const auto ma = mean(wa);
    const auto mb = mean(wb);
    if (ma.empty() || mb.empty()) return 0.0;
    return clamp01(cosine(ma, mb));
}

inline double symmetric(const Vectors& v, const std::string& a, const std::string& b) {
    return std::min(entailment(v, a, b), entailment(v, b, a));
}

// ------------------------------------------------------------------ gadgets

struct GadgetReport {
    int cases = 0;
    std::vector<std::string> failures;
};

// Builds `n` free variables plus whatever the gadget adds, then checks every
// assignment of all model variables against `expected(bits)`. When `forced`
// is given, also fixes the first n variables and checks that solve() picks
// forced(bits) for the gadget's own variable.
template <class Build, class Expected>
void truth_table(GadgetReport& r, const std::string& what, std::size_t n, Build build, Expected expected) {
    supportgraph::IlpModel m;
    std::vector<supportgraph::VarId> xs;
    for (std::size_t j = 0; j < n; ++j) xs.push_back(m.add_variable("x" + std::to_string(j)));
    build(m, xs);
    const std::size_t total = m.num_variables();
    std::vector<std::uint8_t> bits(total, 0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << total); ++mask) {
        for (std::size_t j = 0; j < total; ++j) bits[j] = static_cast<std::uint8_t>((mask >> j) & 1U);
        ++r.cases;
        const bool want = expected(bits);
        if (satisfies(m, bits) != want) {
            std::string b;
            for (const auto x : bits) b += x ? '1' : '0';
            r.failures.push_back(what + " n=" + std::to_string(n) + " bits=" + b + " expected " +
                                 (want ? "feasible" : "infeasible"));
        }
    }
}

template <class Build, class Forced>
void optimal_choice(GadgetReport& r, const std::string& what, std::size_t n, Build build, Forced forced) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        supportgraph::IlpModel m;
        std::vector<supportgraph::VarId> xs;
        std::vector<std::uint8_t> xbits;
        for (std::size_t j = 0; j < n; ++j) {
            xs.push_back(m.add_variable("x" + std::to_string(j)));
            xbits.push_back(static_cast<std::uint8_t>((mask >> j) & 1U));
        }
        const supportgraph::VarId y = build(m, xs);
        for (std::size_t j = 0; j < n; ++j) {
            m.add_constraint({{xs[j], 1.0}}, supportgraph::Sense::Equal, xbits[j]);
        }
        ++r.cases;
        const auto sol = supportgraph::solve(m);
        const bool want = forced(xbits);
        if (!sol.optimal() || sol.value(y) != want) {
            r.failures.push_back(what + " n=" + std::to_string(n) + " mask=" + std::to_string(mask) +
                                 " solver picked the wrong gadget value");
        }
    }
}

inline int ones(const std::vector<std::uint8_t>& bits, std::size_t n) {
    int k = 0;
    for (std::size_t j = 0; j < n; ++j) k += bits[j];
    return k;
}

inline GadgetReport gadget_truth_tables(std::size_t max_n = 4) {
    using supportgraph::Sense;
    using supportgraph::VarId;
    GadgetReport r;
    for (std::size_t n = 0; n <= max_n; ++n) {
        // iff-AND: y is the last variable.
        auto and_build = [](supportgraph::IlpModel& m, const std::vector<VarId>& xs) {
            const VarId y = m.add_variable("y", 0.0);
            supportgraph::add_iff_and(m, y, xs);
            return y;
        };
        truth_table(r, "iff_and", n, and_build, [n](const std::vector<std::uint8_t>& b) {
            return b[n] == (ones(b, n) == static_cast<int>(n) ? 1 : 0);
        });

        for (const Sense sense : {Sense::LessEqual, Sense::GreaterEqual, Sense::Equal}) {
            for (int k = 0; k <= static_cast<int>(n) + 1; ++k) {
                truth_table(
                    r, "cardinality", n,
                    [&](supportgraph::IlpModel& m, const std::vector<VarId>& xs) {
                        supportgraph::add_cardinality(m, xs, sense, k);
                    },
                    [&](const std::vector<std::uint8_t>& b) {
                        const int s = ones(b, n);
                        return sense == Sense::LessEqual ? s <= k : (sense == Sense::GreaterEqual ? s >= k : s == k);
                    });
            }
        }

        for (int k = 0; k <= static_cast<int>(n); ++k) {
            if (n == 0) break;
            auto build = [k](supportgraph::IlpModel& m, const std::vector<VarId>& xs) {
                return supportgraph::add_count_penalty(m, xs, k, -0.5);
            };
            truth_table(r, "count_penalty", n, build, [n, k](const std::vector<std::uint8_t>& b) {
                return b[n] == 1 || ones(b, n) <= k;
            });
            optimal_choice(r, "count_penalty", n, build,
                           [n, k](const std::vector<std::uint8_t>& b) { return ones(b, n) > k; });
        }
        if (n >= 1) {
            optimal_choice(r, "iff_and", n, and_build,
                           [n](const std::vector<std::uint8_t>& b) { return ones(b, n) == static_cast<int>(n); });
        }
    }
    truth_table(
        r, "implication", 2,
        [](supportgraph::IlpModel& m, const std::vector<VarId>& xs) { supportgraph::add_implication(m, xs[0], xs[1]); },
        [](const std::vector<std::uint8_t>& b) { return b[0] <= b[1]; });
    return r;
}

} // namespace oracle

#endif
