#ifndef SUPPORTGRAPH_ILP_HPP
#define SUPPORTGRAPH_ILP_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace supportgraph {

/// Feasibility / objective comparison tolerance shared by every solver path.
inline constexpr double kTolerance = 1e-9;

inline constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;

/// Largest model the exhaustive oracle accepts.
inline constexpr std::size_t kExhaustiveLimit = 25;

enum class Execution { Serial, Parallel };

struct VarId {
    int value = -1;

    friend bool operator==(VarId, VarId) = default;
    friend auto operator<=>(VarId, VarId) = default;
};

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Term {
    VarId var;
    double coef = 0.0;

    friend bool operator==(const Term&, const Term&) = default;
};

struct Variable {
    VarId id;
    std::string name;
    double objective = 0.0;
};

struct Constraint {
    std::vector<Term> terms;
    Sense sense = Sense::LessEqual;
    double bound = 0.0;
    std::string name;
};

/// A 0-1 program: maximize sum(objective_j * x_j) subject to linear constraints.
class IlpModel {
public:
    /// Throws std::invalid_argument when `name` is already taken.
    VarId add_variable(std::string name, double objective = 0.0);

    /// Duplicate variables are merged (coefficients summed) and zero terms
    /// dropped. Throws UnknownVariable for ids outside the model.
    void add_constraint(std::vector<Term> terms, Sense sense, double bound, std::string name = {});

    std::size_t num_variables() const { return variables_.size(); }
    std::size_t num_constraints() const { return constraints_.size(); }
    const std::vector<Variable>& variables() const { return variables_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    const Variable& variable(VarId id) const;
    bool contains(VarId id) const { return id.value >= 0 && static_cast<std::size_t>(id.value) < variables_.size(); }
    /// Throws UnknownVariable.
    void require(VarId id) const;

    void set_objective(VarId id, double objective);

    /// Objective summed in variable id order.
    double objective_value(std::span<const std::uint8_t> assignment) const;
    /// Optimum of the model with every constraint removed.
    double positive_objective_sum() const;

    IlpModel scaled(double factor) const;
    IlpModel without_constraint(std::size_t index) const;

private:
    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
};

enum class SolveStatus { Optimal, Infeasible };

struct Solution {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<std::uint8_t> assignment;
    double objective = 0.0;
    std::uint64_t nodes = 0;

    bool optimal() const { return status == SolveStatus::Optimal; }
    bool value(VarId id) const { return assignment.at(static_cast<std::size_t>(id.value)) != 0; }
};

struct SolverOptions {
    std::uint64_t node_budget = kDefaultNodeBudget;
};

/// Exact branch-and-bound. Among optimal assignments the lexicographically
/// smallest bit string (variable id order) is returned. Throws ResourceLimit
/// when the node budget is exhausted.
Solution solve(const IlpModel& model, const SolverOptions& options = {});

/// Enumerates all 2^n assignments in lexicographic order. Same return contract
/// as solve(). Throws TooLarge above kExhaustiveLimit variables.
Solution exhaustive_solve(const IlpModel& model, Execution execution = Execution::Parallel);

/// Independent post-hoc check of every constraint.
bool is_feasible(const IlpModel& model, std::span<const std::uint8_t> assignment);
std::vector<std::size_t> violated_constraints(const IlpModel& model, std::span<const std::uint8_t> assignment);

bool lex_less(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// lp_solve style text dump ("max: ...; c0: ... <= b; bin ...;").
std::string to_lp_format(const IlpModel& model);

// ------------------------------------------------------------------ gadgets
// Each throws UnknownVariable if a referenced variable is not in the model.

/// y = AND(xs): y <= x_i for every i and y >= sum(xs) - (|xs| - 1).
void add_iff_and(IlpModel& model, VarId y, std::span<const VarId> xs);

/// Creates y (objective `penalty`) with sum(xs) - k <= |xs| * y, so y may be
/// 0 only while at most k of xs are active. An empty name is generated.
VarId add_count_penalty(IlpModel& model, std::span<const VarId> xs, int k, double penalty, std::string name = {});

/// a <= b.
void add_implication(IlpModel& model, VarId a, VarId b);

/// sum(xs) sense k.
void add_cardinality(IlpModel& model, std::span<const VarId> xs, Sense sense, int k);

} // namespace supportgraph

#endif
