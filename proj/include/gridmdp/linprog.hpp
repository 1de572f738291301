#pragma once

#include <Eigen/Dense>

#include <limits>
#include <vector>

namespace gridmdp {

enum class Relation { Le, Ge, Eq };

enum class LpStatus { Optimal, Infeasible, Unbounded };

// General-form linear program:
//   minimize objective . x
//   subject to rows(i) . x (<=, >=, =) rhs(i) and lower <= x <= upper.
// Bounds may be +-infinity.
struct LinearProgram {
    Eigen::VectorXd objective;
    Eigen::MatrixXd rows;  // one constraint per row
    std::vector<Relation> relations;
    Eigen::VectorXd rhs;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    static LinearProgram minimize(const Eigen::VectorXd& objective);

    int num_vars() const { return static_cast<int>(objective.size()); }
    int num_constraints() const { return static_cast<int>(relations.size()); }

    void add_constraint(const Eigen::VectorXd& coeffs, Relation rel, double value);
    void set_bounds(int var, double lo, double hi);

    static constexpr double infinity() { return std::numeric_limits<double>::infinity(); }
};

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Eigen::VectorXd x;
    double objective = 0.0;
    int pivots = 0;
    bool refined = false;  // vertex re-solved from the final basis
};

// Dense two-phase simplex with deterministic pivoting (lexicographic
// tie-breaking on labels, which also prevents cycling). After phase 2 the
// optimal basis is re-solved as a square linear system so the reported
// vertex is accurate well past the pivot tolerance.
LpSolution solve_lp(const LinearProgram& lp, double tol = 1e-8);

}  // namespace gridmdp
