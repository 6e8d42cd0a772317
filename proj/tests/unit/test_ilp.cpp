#include <sstream>

#include "doctest.h"
#include "gen.hpp"
#include "moc/ilp.hpp"

using namespace moc;

namespace {

IlpProblem bit_system() {
    IlpProblem p;
    p.a = IntMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 1}, {1, 0, 0}, {0, 1, 0}, {0, 0, -1}, {-1, 0, 0}, {0, -1, 0}});
    p.b = {1, 1, 1, 2, 1, 1, -1, -1, -1};
    p.c = {1, 0, 0};
    return p;
}

IlpProblem random_problem(std::size_t n, std::size_t m) {
    IlpProblem p;
    p.a = testgen::matrix(m, n, -5, 5);
    p.b.resize(m);
    for (auto& x : p.b) x = testgen::uniform(-5, 5);
    p.c.resize(n);
    for (auto& x : p.c) x = testgen::uniform(-5, 5);
    return p;
}

}  // namespace

TEST_CASE("paper bit system has minimum 1") {
    auto p = bit_system();
    REQUIRE(dual_feasible(p));
    auto r = gomory_solve(p);
    REQUIRE(r.status == IlpOutcome::Status::optimum);
    CHECK(r.value == 1);
    auto bf = brute_force_ilp(p, {1, 1, 1});
    CHECK(bf.value == 1);
}

TEST_CASE("trivial Gomory outcomes") {
    IlpProblem p{IntMatrix::from_rows({{-1}, {1}}), {-1, 0}, {0}};
    CHECK(gomory_solve(p).status == IlpOutcome::Status::infeasible);
    IlpProblem q{IntMatrix::from_rows({{1}}), {3}, {-1}};
    CHECK_FALSE(dual_feasible(q));
    CHECK_THROWS_AS(gomory_solve(q), DomainError);
    auto r = solve_bounded(q, {3});
    CHECK(r.value == -3);
    CHECK(r.x == Vec{3});
    auto bf = brute_force_ilp(q, {3});
    CHECK(bf.x == Vec{3});
    IlpProblem e{IntMatrix::from_rows({{1}}), {-1}, {1}};
    CHECK(brute_force_ilp(e, {4}).status == IlpOutcome::Status::infeasible);
    CHECK_THROWS_AS(brute_force_ilp(e, {BigInt(100000000)}), DomainError);
}

TEST_CASE("pivot limit aborts") {
    auto p = bit_system();
    GomoryOptions o;
    o.pivot_limit = 0;
    CHECK(gomory_solve(p, o).status == IlpOutcome::Status::aborted);
}

TEST_CASE("Gomory agrees with brute force on random box-bounded problems") {
    int nontrivial = 0;
    for (int it = 0; it < 500; ++it) {
        std::size_t n = testgen::uniform(1, 4), m = testgen::uniform(1, 4);
        auto p = random_problem(n, m);
        Vec ub(n);
        for (auto& u : ub) u = testgen::uniform(0, 5);
        std::vector<GomoryStep> trace;
        GomoryOptions o;
        o.trace = &trace;
        auto g = solve_bounded(p, ub, o);
        auto bf = brute_force_ilp(p, ub);
        REQUIRE(g.status == bf.status);
        if (g.status == IlpOutcome::Status::optimum) REQUIRE(g.value == bf.value);
        nontrivial += !trace.empty();
    }
    CHECK(nontrivial > 100);
}

TEST_CASE("Gomory cuts are satisfied by every integer feasible point") {
    for (int it = 0; it < 200; ++it) {
        std::size_t n = testgen::uniform(1, 3);
        IlpProblem p;
        // bound rows first keep the tableau dual feasible for c >= 0
        p.a = IntMatrix::identity(n);
        p.b.assign(n, 0);
        for (auto& x : p.b) x = testgen::uniform(0, 4);
        Vec ub = p.b;
        std::size_t extra = testgen::uniform(1, 3);
        for (std::size_t k = 0; k < extra; ++k) {
            Vec row(n);
            for (auto& x : row) x = testgen::uniform(-5, 5);
            p.a.append_row(row);
            p.b.push_back(testgen::uniform(-6, 6));
        }
        p.c.resize(n);
        for (auto& x : p.c) x = testgen::uniform(0, 4);
        std::vector<GomoryStep> trace;
        GomoryOptions o;
        o.trace = &trace;
        auto g = gomory_solve(p, o);
        auto bf = brute_force_ilp(p, ub);
        REQUIRE(g.status == bf.status);
        if (g.status == IlpOutcome::Status::optimum) REQUIRE(g.value == bf.value);
        // enumerate feasible points and check each recorded cut
        Vec x(n);
        while (true) {
            bool ok = true;
            for (std::size_t i = 0; i < p.a.rows && ok; ++i) ok = dot(p.a.row(i), x) <= p.b[i];
            if (ok)
                for (const auto& st : trace) REQUIRE(dot(st.coef, x) <= st.rhs);
            std::size_t k = 0;
            while (k < n && x[k] == ub[k]) x[k++] = 0;
            if (k == n) break;
            ++x[k];
        }
        for (const auto& st : trace) {
            REQUIRE(st.cut[st.pivot_col] == -1);
            REQUIRE(st.a00_after <= st.a00_before);
            REQUIRE(st.lambda > 0);
        }
    }
}

namespace {

// Fourier-Motzkin elimination: is {x >= 0 : A x = b} nonempty over Q?
bool fm_feasible(const IntMatrix& a, const Vec& b) {
    std::size_t n = a.cols;
    std::vector<std::pair<QVec, Rational>> ineq;  // coef . x <= rhs
    for (std::size_t i = 0; i < a.rows; ++i) {
        QVec r(n), s(n);
        for (std::size_t j = 0; j < n; ++j) r[j] = a(i, j), s[j] = -a(i, j);
        ineq.push_back({r, b[i]});
        ineq.push_back({s, -b[i]});
    }
    for (std::size_t j = 0; j < n; ++j) {
        QVec r(n, Rational(0));
        r[j] = -1;
        ineq.push_back({r, 0});
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<std::pair<QVec, Rational>> pos, neg, keep;
        for (auto& q : ineq) (q.first[v] > 0 ? pos : q.first[v] < 0 ? neg : keep).push_back(q);
        for (auto& p : pos)
            for (auto& q : neg) {
                Rational fp = p.first[v], fq = -q.first[v];
                QVec r(n);
                for (std::size_t j = 0; j < n; ++j) r[j] = p.first[j] / fp + q.first[j] / fq;
                keep.push_back({r, p.second / fp + q.second / fq});
            }
        ineq = std::move(keep);
    }
    for (auto& q : ineq)
        if (q.second < 0) return false;
    return true;
}

}  // namespace

TEST_CASE("lp_feasible agrees with Fourier-Motzkin") {
    CHECK(lp_feasible(IntMatrix::from_rows({{1, 2}, {3, 4}}), {0, 0}).value() == QVec{0, 0});
    int feasible = 0;
    for (int it = 0; it < 500; ++it) {
        std::size_t n = testgen::uniform(1, 4), m = testgen::uniform(1, 3);
        auto a = testgen::matrix(m, n, -4, 4);
        Vec b(m);
        for (auto& x : b) x = testgen::uniform(-6, 6);
        auto r = lp_feasible(a, b);
        REQUIRE(r.has_value() == fm_feasible(a, b));
        feasible += r.has_value();
    }
    CHECK(feasible > 50);
}

TEST_CASE("problem text format") {
    std::ostringstream out;
    write_problem(out, bit_system());
    std::istringstream in(out.str());
    auto p = read_problem(in);
    CHECK(p.a == bit_system().a);
    CHECK(p.b == bit_system().b);
    CHECK(p.c == bit_system().c);
    std::istringstream bad("1 2\n1 2\n3\n");
    CHECK_THROWS_AS(read_problem(bad), FormatError);
}
