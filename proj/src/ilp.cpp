#include "supportgraph/ilp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "supportgraph/errors.hpp"

namespace supportgraph {

// ------------------------------------------------------------------- model

VarId IlpModel::add_variable(std::string name, double objective) {
    for (const auto& v : variables_) {
        if (v.name == name) {
            throw std::invalid_argument("duplicate variable name '" + name + "'");
        }
    }
    VarId id{static_cast<int>(variables_.size())};
    variables_.push_back({id, std::move(name), objective});
    return id;
}

void IlpModel::require(VarId id) const {
    if (!contains(id)) {
        throw UnknownVariable("unknown variable id " + std::to_string(id.value));
    }
}

const Variable& IlpModel::variable(VarId id) const {
    require(id);
    return variables_[static_cast<std::size_t>(id.value)];
}

void IlpModel::set_objective(VarId id, double objective) {
    require(id);
    variables_[static_cast<std::size_t>(id.value)].objective = objective;
}

void IlpModel::add_constraint(std::vector<Term> terms, Sense sense, double bound, std::string name) {
    std::map<int, double> merged;
    for (const auto& t : terms) {
        require(t.var);
        merged[t.var.value] += t.coef;
    }
    Constraint c;
    c.sense = sense;
    c.bound = bound;
    c.name = name.empty() ? "c" + std::to_string(constraints_.size()) : std::move(name);
    for (const auto& [var, coef] : merged) {
        if (coef != 0.0) {
            c.terms.push_back({VarId{var}, coef});
        }
    }
    constraints_.push_back(std::move(c));
}

double IlpModel::objective_value(std::span<const std::uint8_t> assignment) const {
    double total = 0.0;
    for (std::size_t j = 0; j < variables_.size(); ++j) {
        if (assignment[j] != 0) {
            total += variables_[j].objective;
        }
    }
    return total;
}

double IlpModel::positive_objective_sum() const {
    double total = 0.0;
    for (const auto& v : variables_) {
        if (v.objective > 0.0) {
            total += v.objective;
        }
    }
    return total;
}

IlpModel IlpModel::scaled(double factor) const {
    IlpModel copy = *this;
    for (auto& v : copy.variables_) {
        v.objective *= factor;
    }
    return copy;
}

IlpModel IlpModel::without_constraint(std::size_t index) const {
    IlpModel copy = *this;
    copy.constraints_.erase(copy.constraints_.begin() + static_cast<std::ptrdiff_t>(index));
    return copy;
}

// ------------------------------------------------------------ verification

std::vector<std::size_t> violated_constraints(const IlpModel& model, std::span<const std::uint8_t> assignment) {
    std::vector<std::size_t> violated;
    const auto& constraints = model.constraints();
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        double lhs = 0.0;
        for (const auto& t : constraints[i].terms) {
            if (assignment[static_cast<std::size_t>(t.var.value)] != 0) {
                lhs += t.coef;
            }
        }
        const double b = constraints[i].bound;
        bool ok = true;
        switch (constraints[i].sense) {
        case Sense::LessEqual: ok = lhs <= b + kTolerance; break;
        case Sense::GreaterEqual: ok = lhs >= b - kTolerance; break;
        case Sense::Equal: ok = std::abs(lhs - b) <= kTolerance; break;
        }
        if (!ok) {
            violated.push_back(i);
        }
    }
    return violated;
}

bool is_feasible(const IlpModel& model, std::span<const std::uint8_t> assignment) {
    return assignment.size() == model.num_variables() && violated_constraints(model, assignment).empty();
}

bool lex_less(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::string to_lp_format(const IlpModel& model) {
    std::ostringstream out;
    out.precision(17);
    auto term = [&](double coef, VarId var, bool first) {
        if (coef < 0) {
            out << (first ? " -" : " - ") << -coef;
        } else {
            out << (first ? " " : " + ") << coef;
        }
        out << " x" << var.value;
    };
    out << "/* variables:\n";
    for (const auto& v : model.variables()) {
        out << "   x" << v.id.value << " = " << v.name << "\n";
    }
    out << "*/\nmax:";
    bool first = true;
    for (const auto& v : model.variables()) {
        if (v.objective != 0.0) {
            term(v.objective, v.id, first);
            first = false;
        }
    }
    if (first) {
        out << " 0";
    }
    out << ";\n";
    for (std::size_t i = 0; i < model.constraints().size(); ++i) {
        const auto& c = model.constraints()[i];
        out << c.name << ":";
        if (c.terms.empty()) {
            out << " 0";
        }
        bool f = true;
        for (const auto& t : c.terms) {
            term(t.coef, t.var, f);
            f = false;
        }
        out << (c.sense == Sense::LessEqual ? " <= " : c.sense == Sense::GreaterEqual ? " >= " : " = ") << c.bound
            << ";\n";
    }
    if (model.num_variables() > 0) {
        out << "bin";
        for (std::size_t j = 0; j < model.num_variables(); ++j) {
            out << (j == 0 ? " x" : ", x") << j;
        }
        out << ";\n";
    }
    return out.str();
}

// ---------------------------------------------------------- branch & bound

namespace {

constexpr std::int8_t kUnset = -1;

/// Search state for one solve() call. Constraints are normalized to rows
/// sum(a_j x_j) <= b; each row tracks its minimum activity over the current
/// partial assignment, which drives both conflict detection and propagation.
class BranchAndBound {
public:
    BranchAndBound(const IlpModel& model, const SolverOptions& options) : model_(model), options_(options) {
        const std::size_t n = model.num_variables();
        value_.assign(n, kUnset);
        occurrences_.resize(n);
        for (const auto& c : model.constraints()) {
            if (c.sense != Sense::GreaterEqual) {
                add_row(c.terms, 1.0, c.bound);
            }
            if (c.sense != Sense::LessEqual) {
                add_row(c.terms, -1.0, -c.bound);
            }
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double c = model.variables()[j].objective;
            if (c > 0.0) {
                unfixed_positive_ += c;
            }
            order_.push_back(static_cast<int>(j));
        }
        // Largest |objective| first; ties and zero-objective tail in id order.
        std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
            return std::abs(objective(a)) > std::abs(objective(b));
        });
    }

    Solution run() {
        Solution result;
        std::vector<int> all_rows(rows_.size());
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            all_rows[r] = static_cast<int>(r);
        }
        if (propagate(all_rows)) {
            search(0);
        }
        result.nodes = nodes_;
        if (has_incumbent_) {
            result.status = SolveStatus::Optimal;
            result.assignment = incumbent_;
            result.objective = incumbent_value_;
        } else {
            result.status = SolveStatus::Infeasible;
        }
        return result;
    }

private:
    struct Row {
        std::vector<int> vars;
        std::vector<double> coefs;
        double bound = 0.0;
        double max_abs = 0.0;
        double min_activity = 0.0;
    };

    double objective(int j) const { return model_.variables()[static_cast<std::size_t>(j)].objective; }

    void add_row(const std::vector<Term>& terms, double sign, double bound) {
        Row row;
        row.bound = bound;
        for (const auto& t : terms) {
            const double a = sign * t.coef;
            row.vars.push_back(t.var.value);
            row.coefs.push_back(a);
            row.max_abs = std::max(row.max_abs, std::abs(a));
            if (a < 0.0) {
                row.min_activity += a;
            }
        }
        const int index = static_cast<int>(rows_.size());
        for (std::size_t k = 0; k < row.vars.size(); ++k) {
            occurrences_[static_cast<std::size_t>(row.vars[k])].push_back({index, row.coefs[k]});
        }
        rows_.push_back(std::move(row));
    }

    // Fixes x_j = v and records every touched row in `dirty`.
    void assign(int j, std::int8_t v, std::vector<int>& dirty) {
        value_[static_cast<std::size_t>(j)] = v;
        trail_.push_back(j);
        const double c = objective(j);
        if (c > 0.0) {
            unfixed_positive_ -= c;
        }
        if (v == 1) {
            fixed_value_ += c;
        }
        for (const auto& [r, a] : occurrences_[static_cast<std::size_t>(j)]) {
            auto& row = rows_[static_cast<std::size_t>(r)];
            if ((a > 0.0 && v == 1) || (a < 0.0 && v == 0)) {
                row_trail_.push_back({r, row.min_activity});
                row.min_activity += std::abs(a);
                dirty.push_back(r);
            }
        }
    }

    bool propagate(std::vector<int>& queue) {
        while (!queue.empty()) {
            const int r = queue.back();
            queue.pop_back();
            const auto& row = rows_[static_cast<std::size_t>(r)];
            const double slack = row.bound - row.min_activity;
            if (slack < -kTolerance) {
                return false;
            }
            if (row.max_abs <= slack + kTolerance) {
                continue;
            }
            for (std::size_t k = 0; k < row.vars.size(); ++k) {
                const int j = row.vars[k];
                if (value_[static_cast<std::size_t>(j)] != kUnset) {
                    continue;
                }
                const double a = row.coefs[k];
                if (std::abs(a) > slack + kTolerance) {
                    assign(j, a > 0.0 ? 0 : 1, queue);
                }
            }
        }
        return true;
    }

    void undo(std::size_t trail_mark, std::size_t row_mark) {
        while (row_trail_.size() > row_mark) {
            const auto [r, old] = row_trail_.back();
            rows_[static_cast<std::size_t>(r)].min_activity = old;
            row_trail_.pop_back();
        }
        while (trail_.size() > trail_mark) {
            const int j = trail_.back();
            const double c = objective(j);
            if (c > 0.0) {
                unfixed_positive_ += c;
            }
            if (value_[static_cast<std::size_t>(j)] == 1) {
                fixed_value_ -= c;
            }
            value_[static_cast<std::size_t>(j)] = kUnset;
            trail_.pop_back();
        }
    }

    // True when some completion of the current partial assignment could be
    // lexicographically smaller than the incumbent.
    bool may_beat_incumbent_lexicographically() const {
        for (std::size_t j = 0; j < value_.size(); ++j) {
            if (value_[j] == kUnset) {
                return true;
            }
            if (static_cast<std::uint8_t>(value_[j]) != incumbent_[j]) {
                return value_[j] < incumbent_[j];
            }
        }
        return false;
    }

    void record_leaf() {
        std::vector<std::uint8_t> bits(value_.size());
        for (std::size_t j = 0; j < value_.size(); ++j) {
            bits[j] = static_cast<std::uint8_t>(value_[j]);
        }
        const double value = model_.objective_value(bits);
        if (!has_incumbent_ || value > incumbent_value_ + kTolerance ||
            (value >= incumbent_value_ - kTolerance && lex_less(bits, incumbent_))) {
            has_incumbent_ = true;
            incumbent_value_ = value;
            incumbent_ = std::move(bits);
        }
    }

    void search(std::size_t order_pos) {
        if (++nodes_ > options_.node_budget) {
            throw ResourceLimit("branch-and-bound node budget of " + std::to_string(options_.node_budget) +
                                " exhausted");
        }
        if (has_incumbent_) {
            const double bound = fixed_value_ + unfixed_positive_;
            if (bound < incumbent_value_ - kTolerance) {
                return;
            }
            if (bound <= incumbent_value_ + kTolerance && !may_beat_incumbent_lexicographically()) {
                return;
            }
        }
        while (order_pos < order_.size() && value_[static_cast<std::size_t>(order_[order_pos])] != kUnset) {
            ++order_pos;
        }
        if (order_pos == order_.size()) {
            record_leaf();
            return;
        }
        const int j = order_[order_pos];
        // 1-branch first, except for zero-objective variables where 0 first
        // reaches the lexicographically smallest completion directly.
        const std::int8_t first = objective(j) == 0.0 ? 0 : 1;
        for (const std::int8_t v : {first, static_cast<std::int8_t>(1 - first)}) {
            const std::size_t trail_mark = trail_.size();
            const std::size_t row_mark = row_trail_.size();
            std::vector<int> dirty;
            assign(j, v, dirty);
            if (propagate(dirty)) {
                search(order_pos + 1);
            }
            undo(trail_mark, row_mark);
        }
    }

    const IlpModel& model_;
    SolverOptions options_;
    std::vector<Row> rows_;
    std::vector<std::vector<std::pair<int, double>>> occurrences_;
    std::vector<std::int8_t> value_;
    std::vector<int> order_;
    std::vector<int> trail_;
    std::vector<std::pair<int, double>> row_trail_;
    double fixed_value_ = 0.0;
    double unfixed_positive_ = 0.0;
    std::uint64_t nodes_ = 0;
    bool has_incumbent_ = false;
    double incumbent_value_ = 0.0;
    std::vector<std::uint8_t> incumbent_;
};

} // namespace

Solution solve(const IlpModel& model, const SolverOptions& options) {
    BranchAndBound search(model, options);
    return search.run();
}

} // namespace supportgraph
