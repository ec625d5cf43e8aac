#include <stdexcept>

#include "supportgraph/errors.hpp"
#include "supportgraph/ilp.hpp"

namespace supportgraph {

void add_iff_and(IlpModel& model, VarId y, std::span<const VarId> xs) {
    model.require(y);
    for (const VarId x : xs) {
        model.require(x);
    }
    for (const VarId x : xs) {
        model.add_constraint({{y, 1.0}, {x, -1.0}}, Sense::LessEqual, 0.0);
    }
    // y >= sum(xs) - (|xs| - 1)
    std::vector<Term> terms{{y, 1.0}};
    for (const VarId x : xs) {
        terms.push_back({x, -1.0});
    }
    model.add_constraint(std::move(terms), Sense::GreaterEqual, 1.0 - static_cast<double>(xs.size()));
}

VarId add_count_penalty(IlpModel& model, std::span<const VarId> xs, int k, double penalty, std::string name) {
    for (const VarId x : xs) {
        model.require(x);
    }
    if (k < 0) {
        throw std::invalid_argument("count penalty threshold must be non-negative");
    }
    if (!(penalty < 0.0)) {
        throw std::invalid_argument("count penalty weight must be negative");
    }
    if (name.empty()) {
        name = "count_penalty_" + std::to_string(model.num_variables());
    }
    const VarId y = model.add_variable(std::move(name), penalty);
    // sum(xs) - |xs| * y <= k
    std::vector<Term> terms;
    for (const VarId x : xs) {
        terms.push_back({x, 1.0});
    }
    terms.push_back({y, -static_cast<double>(xs.size())});
    model.add_constraint(std::move(terms), Sense::LessEqual, static_cast<double>(k));
    return y;
}

void add_implication(IlpModel& model, VarId a, VarId b) {
    model.require(a);
    model.require(b);
    model.add_constraint({{a, 1.0}, {b, -1.0}}, Sense::LessEqual, 0.0);
}

void add_cardinality(IlpModel& model, std::span<const VarId> xs, Sense sense, int k) {
    for (const VarId x : xs) {
        model.require(x);
    }
    if (k < 0) {
        throw std::invalid_argument("cardinality bound must be non-negative");
    }
    std::vector<Term> terms;
    for (const VarId x : xs) {
        terms.push_back({x, 1.0});
    }
    model.add_constraint(std::move(terms), sense, static_cast<double>(k));
}

} // namespace supportgraph
