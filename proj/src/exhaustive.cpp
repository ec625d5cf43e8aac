#include <algorithm>
#include <cmath>

#include "supportgraph/errors.hpp"
#include "supportgraph/ilp.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace supportgraph {

namespace {

// Plain enumeration with no pruning, kept deliberately separate from the
// branch-and-bound data structures. Variables are fixed in id order with the
// 0-branch first, so leaves are visited in ascending lexicographic order and
// the first of several equal optima is the lexicographically smallest.
class Enumerator {
public:
    explicit Enumerator(const IlpModel& model) : model_(model) {
        const std::size_t n = model.num_variables();
        bits_.assign(n, 0);
        activity_.assign(model.num_constraints(), 0.0);
        touching_.resize(n);
        for (std::size_t i = 0; i < model.num_constraints(); ++i) {
            for (const auto& t : model.constraints()[i].terms) {
                touching_[static_cast<std::size_t>(t.var.value)].push_back({i, t.coef});
            }
        }
    }

    /// Enumerates every completion of the first `prefix_len` variables set
    /// from the high bits of `prefix`.
    void run(std::size_t prefix_len, std::uint64_t prefix) {
        for (std::size_t j = 0; j < prefix_len; ++j) {
            const bool bit = ((prefix >> (prefix_len - 1 - j)) & 1U) != 0;
            if (bit) {
                set(j, 1);
            }
        }
        visit(prefix_len);
    }

    bool found() const { return found_; }
    double best_value() const { return best_value_; }
    const std::vector<std::uint8_t>& best() const { return best_; }

private:
    void set(std::size_t j, std::uint8_t v) {
        if (bits_[j] == v) {
            return;
        }
        bits_[j] = v;
        const double sign = v ? 1.0 : -1.0;
        for (const auto& [i, coef] : touching_[j]) {
            activity_[i] += sign * coef;
        }
    }

    bool satisfied() const {
        const auto& constraints = model_.constraints();
        for (std::size_t i = 0; i < constraints.size(); ++i) {
            // Recompute from scratch; the running sums are only a filter.
            double lhs = 0.0;
            for (const auto& t : constraints[i].terms) {
                if (bits_[static_cast<std::size_t>(t.var.value)] != 0) {
                    lhs += t.coef;
                }
            }
            const double b = constraints[i].bound;
            switch (constraints[i].sense) {
            case Sense::LessEqual:
                if (lhs > b + kTolerance) return false;
                break;
            case Sense::GreaterEqual:
                if (lhs < b - kTolerance) return false;
                break;
            case Sense::Equal:
                if (std::abs(lhs - b) > kTolerance) return false;
                break;
            }
        }
        return true;
    }

    bool quick_reject() const {
        const auto& constraints = model_.constraints();
        for (std::size_t i = 0; i < constraints.size(); ++i) {
            const double lhs = activity_[i];
            const double b = constraints[i].bound;
            // Generous margin: this only skips clear violations.
            const double margin = 1e-6;
            switch (constraints[i].sense) {
            case Sense::LessEqual:
                if (lhs > b + margin) return true;
                break;
            case Sense::GreaterEqual:
                if (lhs < b - margin) return true;
                break;
            case Sense::Equal:
                if (std::abs(lhs - b) > margin) return true;
                break;
            }
        }
        return false;
    }

    void leaf() {
        if (quick_reject() || !satisfied()) {
            return;
        }
        const double value = model_.objective_value(bits_);
        if (!found_ || value > best_value_ + kTolerance) {
            found_ = true;
            best_value_ = value;
            best_ = bits_;
        }
    }

    void visit(std::size_t depth) {
        if (depth == bits_.size()) {
            leaf();
            return;
        }
        visit(depth + 1);
        set(depth, 1);
        visit(depth + 1);
        set(depth, 0);
    }

    const IlpModel& model_;
    std::vector<std::uint8_t> bits_;
    std::vector<double> activity_;
    std::vector<std::vector<std::pair<std::size_t, double>>> touching_;
    bool found_ = false;
    double best_value_ = 0.0;
    std::vector<std::uint8_t> best_;
};

Solution to_solution(bool found, double value, std::vector<std::uint8_t> bits) {
    Solution s;
    if (found) {
        s.status = SolveStatus::Optimal;
        s.objective = value;
        s.assignment = std::move(bits);
    }
    return s;
}

} // namespace

Solution exhaustive_solve(const IlpModel& model, Execution execution) {
    const std::size_t n = model.num_variables();
    if (n > kExhaustiveLimit) {
        throw TooLarge("exhaustive_solve accepts at most " + std::to_string(kExhaustiveLimit) + " variables, got " +
                       std::to_string(n));
    }

    if (execution == Execution::Serial || n < 12) {
        Enumerator e(model);
        e.run(0, 0);
        return to_solution(e.found(), e.best_value(), e.best());
    }

    // Split on the first `prefix_len` variables; each prefix is a contiguous
    // block of the lexicographic order, so reducing in prefix order keeps the
    // serial tie-break.
    const std::size_t prefix_len = std::min<std::size_t>(n, 6);
    const std::size_t blocks = std::size_t{1} << prefix_len;
    std::vector<char> found(blocks, 0);
    std::vector<double> values(blocks, 0.0);
    std::vector<std::vector<std::uint8_t>> bests(blocks);

#pragma omp parallel for schedule(dynamic)
    for (std::size_t b = 0; b < blocks; ++b) {
        Enumerator e(model);
        e.run(prefix_len, b);
        found[b] = e.found() ? 1 : 0;
        values[b] = e.best_value();
        bests[b] = e.best();
    }

    bool any = false;
    double best_value = 0.0;
    std::size_t best_block = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
        if (found[b] && (!any || values[b] > best_value + kTolerance)) {
            any = true;
            best_value = values[b];
            best_block = b;
        }
    }
    return to_solution(any, best_value, any ? bests[best_block] : std::vector<std::uint8_t>{});
}

} // namespace supportgraph
