#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "moc/intlin.hpp"

namespace moc {

// minimize c.x subject to A x <= b, x a vector of nonnegative integers.
struct IlpProblem {
    IntMatrix a;
    Vec b, c;
    void validate() const;
};

struct IlpOutcome {
    enum class Status { optimum, infeasible, aborted } status = Status::infeasible;
    Vec x;
    BigInt value;
    std::size_t pivots = 0;
};

// One Gomory iteration. The cut is also expressed over the original
// variables as coef.x <= rhs so that its validity can be checked.
struct GomoryStep {
    std::size_t source_row, pivot_col;
    Rational lambda;
    Vec cut;  // a_{m+1,0..n}
    BigInt a00_before, a00_after;
    Vec coef;
    BigInt rhs;
};

struct GomoryOptions {
    std::size_t pivot_limit = 100000;
    bool check_invariants = true;
    std::vector<GomoryStep>* trace = nullptr;
};

// Gomory's all-integer dual algorithm. The tableau must be dual feasible:
// the first nonzero entry of every column (objective row first, then the
// constraint rows) is positive. Rows without negative entries are moved to
// the front when that establishes the condition; otherwise a DomainError is
// raised.
IlpOutcome gomory_solve(const IlpProblem& p, const GomoryOptions& opt = {});

bool dual_feasible(const IlpProblem& p);

// Adds the bounds x_j <= u_j in front of the constraints and complements
// variables with negative cost, which makes any box-bounded problem dual
// feasible, then solves with gomory_solve. A leading row caps the objective
// at its maximum over the box; without it an infeasible problem lets the
// objective entry fall forever.
IlpOutcome solve_bounded(const IlpProblem& p, const Vec& upper, const GomoryOptions& opt = {});

// Exhaustive search over 0 <= x_j <= upper_j; at most 10^7 points.
IlpOutcome brute_force_ilp(const IlpProblem& p, const Vec& upper);

// Rational x >= 0 with A x = b by an exact two-phase simplex with Bland's
// rule. The result is checked by substitution.
std::optional<QVec> lp_feasible(const IntMatrix& a, const Vec& b);

// "m n" header, the m rows of A, then b (m values) and c (n values).
IlpProblem read_problem(std::istream& in);
void write_problem(std::ostream& out, const IlpProblem& p);

}  // namespace moc
