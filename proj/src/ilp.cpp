#include "moc/ilp.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace moc {

void IlpProblem::validate() const {
    if (b.size() != a.rows || c.size() != a.cols) throw DomainError("ILP dimensions are inconsistent");
}

namespace {

using Tableau = std::vector<Vec>;

// Sign of the first nonzero entry of column j.
int lex_sign(const Tableau& t, std::size_t j) {
    for (const auto& row : t)
        if (row[j] != 0) return sgn(row[j]);
    return 0;
}

// -1, 0, 1 as column j is lexicographically below, equal to, above column k.
int lex_cmp(const Tableau& t, std::size_t j, std::size_t k) {
    for (const auto& row : t)
        if (row[j] != row[k]) return row[j] < row[k] ? -1 : 1;
    return 0;
}

bool columns_dual_feasible(const Tableau& t, std::size_t n) {
    for (std::size_t j = 1; j <= n; ++j)
        if (lex_sign(t, j) < 0) return false;
    return true;
}

Tableau initial_tableau(const IlpProblem& p) {
    const std::size_t m = p.a.rows, n = p.a.cols;
    Tableau t(m + 1, Vec(n + 1));
    for (std::size_t j = 0; j < n; ++j) t[0][j + 1] = p.c[j];
    for (std::size_t i = 0; i < m; ++i) {
        t[i + 1][0] = p.b[i];
        for (std::size_t j = 0; j < n; ++j) t[i + 1][j + 1] = p.a(i, j);
    }
    return t;
}

// Smallest integer mu for which column j + mu * column s stays
// lexicographically positive; nullopt stands for minus infinity.
std::optional<BigInt> mu_for(const Tableau& t, std::size_t j, std::size_t s) {
    if (lex_cmp(t, j, s) == 0) return BigInt(-1);
    std::size_t i0 = 0;
    while (t[i0][j] == 0) ++i0;
    if (t[i0][s] == 0) return std::nullopt;
    Rational ratio = make_rational(-t[i0][j], t[i0][s]);
    if (!is_integral(ratio)) return ceil_q(ratio);
    BigInt mu = ratio.get_num();
    for (const auto& row : t) {
        BigInt v = row[j] + mu * row[s];
        if (v != 0) return v > 0 ? mu : BigInt(mu + 1);
    }
    return BigInt(mu + 1);
}

}  // namespace

bool dual_feasible(const IlpProblem& p) {
    p.validate();
    return columns_dual_feasible(initial_tableau(p), p.a.cols);
}

namespace {

// Constraint order does not change the problem, only the column signs the
// tableau starts from: rows without negative entries are moved to the top.
std::optional<IlpProblem> reorder_dual_feasible(const IlpProblem& p) {
    std::vector<std::size_t> order;
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t i = 0; i < p.a.rows; ++i) {
            bool nonneg_row = true;
            for (std::size_t j = 0; j < p.a.cols; ++j) nonneg_row = nonneg_row && p.a(i, j) >= 0;
            if (nonneg_row == (pass == 0)) order.push_back(i);
        }
    IlpProblem q{IntMatrix(p.a.rows, p.a.cols), Vec(p.b.size()), p.c};
    for (std::size_t k = 0; k < order.size(); ++k) {
        q.a.set_row(k, p.a.row(order[k]));
        q.b[k] = p.b[order[k]];
    }
    if (!columns_dual_feasible(initial_tableau(q), q.a.cols)) return std::nullopt;
    return q;
}

}  // namespace

IlpOutcome gomory_solve(const IlpProblem& p, const GomoryOptions& opt) {
    p.validate();
    if (!columns_dual_feasible(initial_tableau(p), p.a.cols)) {
        auto q = reorder_dual_feasible(p);
        if (!q) throw DomainError("ILP tableau is not dual feasible");
        return gomory_solve(*q, opt);
    }
    const std::size_t n = p.a.cols, m = p.a.rows;
    Tableau t = initial_tableau(p);

    // Labels: 0..n-1 original variables, n..n+m-1 slacks, then cut slacks.
    std::vector<std::size_t> rowlab(m + 1), collab(n + 1);
    for (std::size_t i = 1; i <= m; ++i) rowlab[i] = n + i - 1;
    for (std::size_t j = 1; j <= n; ++j) collab[j] = j - 1;
    // Each label as an affine function (constant, coefficients) of the original variables.
    std::vector<Vec> expr;
    for (std::size_t j = 0; j < n; ++j) {
        Vec e(n + 1);
        e[j + 1] = 1;
        expr.push_back(e);
    }
    for (std::size_t i = 0; i < m; ++i) {
        Vec e(n + 1);
        e[0] = p.b[i];
        for (std::size_t j = 0; j < n; ++j) e[j + 1] = -p.a(i, j);
        expr.push_back(e);
    }

    IlpOutcome out;
    while (true) {
        std::size_t src = 0;
        for (std::size_t i = 1; i < t.size() && !src; ++i)
            if (t[i][0] < 0) src = i;
        if (!src) break;
        if (out.pivots >= opt.pivot_limit) {
            out.status = IlpOutcome::Status::aborted;
            return out;
        }
        std::vector<std::size_t> jset;
        for (std::size_t j = 1; j <= n; ++j)
            if (t[src][j] < 0) jset.push_back(j);
        if (jset.empty()) {
            out.status = IlpOutcome::Status::infeasible;
            return out;
        }
        std::size_t s = jset[0];
        for (std::size_t j : jset)
            if (lex_cmp(t, j, s) < 0) s = j;

        Rational lambda = 0;
        for (std::size_t j : jset) {
            auto mu = mu_for(t, j, s);
            if (!mu) continue;
            if (*mu >= 0) throw std::logic_error("Gomory step: multiplier must be negative");
            Rational lj = make_rational(t[src][j], *mu);
            if (lj > lambda) lambda = lj;
        }
        if (lambda == 1) {
            BigInt mx = 0;
            for (const auto& x : t[src])
                if (abs(x) > mx) mx = abs(x);
            lambda = 1 + make_rational(1, mx + 1);
        }
        Vec cut(n + 1);
        for (std::size_t j = 0; j <= n; ++j) cut[j] = floor_q(Rational(t[src][j]) / lambda);
        if (cut[s] != -1) throw std::logic_error("Gomory step: pivot entry is not -1");

        GomoryStep step{src, s, lambda, cut, t[0][0], 0, {}, 0};
        // The new slack equals cut_0 - sum_j cut_j * (variable of column j).
        Vec ce(n + 1);
        ce[0] = cut[0];
        for (std::size_t j = 1; j <= n; ++j) ce = ce - scaled(expr[collab[j]], cut[j]);
        expr.push_back(ce);
        step.rhs = ce[0];
        step.coef.assign(ce.begin() + 1, ce.end());
        for (auto& x : step.coef) x = -x;

        const std::size_t r = t.size();
        t.push_back(cut);
        rowlab.push_back(0);
        for (std::size_t i = 0; i < r; ++i) {
            const BigInt f = t[i][s];
            if (f == 0) continue;
            for (std::size_t j = 0; j <= n; ++j)
                if (j != s) t[i][j] += f * t[r][j];
        }
        for (std::size_t j = 0; j <= n; ++j)
            if (j != s) t[r][j] = -t[r][j];
        rowlab[r] = collab[s];
        collab[s] = expr.size() - 1;
        ++out.pivots;

        step.a00_after = t[0][0];
        if (opt.check_invariants) {
            if (step.a00_after > step.a00_before) throw std::logic_error("Gomory step: objective entry increased");
            if (!columns_dual_feasible(t, n)) throw std::logic_error("Gomory step: lost dual feasibility");
        }
        if (opt.trace) opt.trace->push_back(std::move(step));
    }

    out.status = IlpOutcome::Status::optimum;
    out.x.assign(n, 0);
    for (std::size_t i = 1; i < t.size(); ++i)
        if (rowlab[i] < n) out.x[rowlab[i]] = t[i][0];
    out.value = dot(p.c, out.x);
    if (opt.check_invariants) {
        if (out.value != -t[0][0]) throw std::logic_error("Gomory: objective value disagrees with the tableau");
        Vec ax = times_col(p.a, out.x);
        for (std::size_t i = 0; i < m; ++i)
            if (ax[i] > p.b[i]) throw std::logic_error("Gomory: solution violates a constraint");
        if (!nonneg(out.x)) throw std::logic_error("Gomory: negative solution");
    }
    return out;
}

IlpOutcome solve_bounded(const IlpProblem& p, const Vec& upper, const GomoryOptions& opt) {
    p.validate();
    const std::size_t n = p.a.cols, m = p.a.rows;
    if (upper.size() != n) throw DomainError("bound vector has wrong length");
    for (const auto& u : upper)
        if (u < 0) throw DomainError("negative upper bound");
    // Row 0 caps the objective at its largest value over the box, rows
    // 1..n are the bounds, the original constraints follow. Variables with
    // negative cost are complemented, x_j = u_j - y_j.
    IlpProblem q;
    q.a = IntMatrix(1 + n + m, n);
    q.b.assign(1 + n + m, 0);
    q.c = p.c;
    for (std::size_t j = 0; j < n; ++j) {
        q.a(1 + j, j) = 1;
        q.b[1 + j] = upper[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
        q.b[1 + n + i] = p.b[i];
        for (std::size_t j = 0; j < n; ++j) q.a(1 + n + i, j) = p.a(i, j);
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (p.c[j] >= 0) continue;
        for (std::size_t i = 0; i < m; ++i) {
            q.b[1 + n + i] -= p.a(i, j) * upper[j];
            q.a(1 + n + i, j) = -p.a(i, j);
        }
        q.c[j] = -p.c[j];
    }
    for (std::size_t j = 0; j < n; ++j) {
        q.a(0, j) = q.c[j];
        q.b[0] += q.c[j] * upper[j];
    }
    auto r = gomory_solve(q, opt);
    if (r.status != IlpOutcome::Status::optimum) return r;
    for (std::size_t j = 0; j < n; ++j)
        if (p.c[j] < 0) r.x[j] = upper[j] - r.x[j];
    r.value = dot(p.c, r.x);
    return r;
}

IlpOutcome brute_force_ilp(const IlpProblem& p, const Vec& upper) {
    p.validate();
    const std::size_t n = p.a.cols;
    if (upper.size() != n) throw DomainError("bound vector has wrong length");
    BigInt points = 1;
    for (const auto& u : upper) {
        if (u < 0) throw DomainError("negative upper bound");
        points *= u + 1;
    }
    if (points > 10000000) throw DomainError("box too large for exhaustive search");
    IlpOutcome best;
    Vec x(n);
    while (true) {
        bool ok = true;
        for (std::size_t i = 0; i < p.a.rows && ok; ++i) {
            BigInt s = 0;
            for (std::size_t j = 0; j < n; ++j) s += p.a(i, j) * x[j];
            ok = s <= p.b[i];
        }
        if (ok) {
            BigInt v = dot(p.c, x);
            if (best.status != IlpOutcome::Status::optimum || v < best.value) {
                best.status = IlpOutcome::Status::optimum;
                best.value = v;
                best.x = x;
            }
        }
        std::size_t k = 0;
        while (k < n && x[k] == upper[k]) x[k++] = 0;
        if (k == n) break;
        ++x[k];
    }
    return best;
}

std::optional<QVec> lp_feasible(const IntMatrix& a, const Vec& b) {
    const std::size_t m = a.rows, n = a.cols;
    if (b.size() != m) throw DomainError("right-hand side length mismatch");
    // Columns: x_0..x_{n-1}, artificials n..n+m-1, right-hand side last.
    std::vector<QVec> t(m, QVec(n + m + 1));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        int sg = b[i] < 0 ? -1 : 1;
        for (std::size_t j = 0; j < n; ++j) t[i][j] = a(i, j) * sg;
        t[i][n + i] = 1;
        t[i][n + m] = b[i] * sg;
        basis[i] = n + i;
    }
    auto cost = [&](std::size_t j) { return j >= n ? 1 : 0; };
    while (true) {
        std::size_t enter = n + m;
        for (std::size_t j = 0; j < n + m && enter == n + m; ++j) {
            Rational red = cost(j);
            for (std::size_t i = 0; i < m; ++i) red -= cost(basis[i]) * t[i][j];
            if (red < 0) enter = j;
        }
        if (enter == n + m) break;
        std::size_t leave = m;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] <= 0) continue;
            Rational ratio = t[i][n + m] / t[i][enter];
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m) throw std::logic_error("phase one objective is bounded below; unbounded ray impossible");
        Rational pv = t[leave][enter];
        for (auto& x : t[leave]) x /= pv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            Rational f = t[i][enter];
            for (std::size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }
    QVec x(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] >= n) {
            if (t[i][n + m] != 0) return std::nullopt;
        } else {
            x[basis[i]] = t[i][n + m];
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        Rational s = 0;
        for (std::size_t j = 0; j < n; ++j) s += a(i, j) * x[j];
        if (s != b[i]) throw std::logic_error("lp_feasible: solution does not substitute");
    }
    for (const auto& v : x)
        if (v < 0) throw std::logic_error("lp_feasible: negative solution");
    return x;
}

IlpProblem read_problem(std::istream& in) {
    IlpProblem p;
    p.a = read_matrix(in);
    auto read_vec = [&](std::size_t k, const char* what) {
        Vec v(k);
        for (auto& x : v) {
            std::string tok;
            if (!(in >> tok)) throw FormatError(std::string("ILP problem: missing entries of ") + what);
            x = parse_bigint(tok);
        }
        return v;
    };
    p.b = read_vec(p.a.rows, "b");
    p.c = read_vec(p.a.cols, "c");
    return p;
}

void write_problem(std::ostream& out, const IlpProblem& p) {
    write_matrix(out, p.a);
    for (std::size_t i = 0; i < p.b.size(); ++i) out << (i ? " " : "") << p.b[i];
    out << "\n";
    for (std::size_t j = 0; j < p.c.size(); ++j) out << (j ? " " : "") << p.c[j];
    out << "\n";
}

}  // namespace moc
