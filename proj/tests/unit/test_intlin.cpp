#include <sstream>

#include "doctest.h"
#include "gen.hpp"

using namespace moc;

namespace {

BigInt cofactor_det(const IntMatrix& m) {
    std::size_t n = m.rows;
    if (n == 0) return 1;
    if (n == 1) return m(0, 0);
    BigInt s = 0;
    for (std::size_t j = 0; j < n; ++j) {
        IntMatrix minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t k = 0, c = 0; k < n; ++k)
                if (k != j) minor(i - 1, c++) = m(i, k);
        BigInt t = m(0, j) * cofactor_det(minor);
        s += j % 2 ? BigInt(-t) : t;
    }
    return s;
}

IntMatrix independent_rows(std::size_t r, std::size_t c, long lo, long hi) {
    while (true) {
        auto m = testgen::matrix(r, c, lo, hi);
        if (rank(m) == r) return m;
    }
}

}  // namespace

TEST_CASE("determinant, product and inverse agree with the cofactor oracle") {
    for (int it = 0; it < 1000; ++it) {
        std::size_t n = testgen::uniform(1, 6);
        auto m = testgen::matrix(n, n, -5, 5);
        BigInt d = cofactor_det(m);
        REQUIRE(det(m) == d);
        REQUIRE(det(transpose(m)) == d);
        REQUIRE((rank(m) == n || d == 0));
        auto m2 = testgen::matrix(n, n, -3, 3);
        REQUIRE(det(m * m2) == d * cofactor_det(m2));
        auto inv = unimodular_inverse(m);
        REQUIRE(inv.has_value() == (d == 1 || d == -1));
        if (inv) REQUIRE(m * *inv == IntMatrix::identity(n));
    }
}

TEST_CASE("hermite normal form is a lattice invariant") {
    for (int it = 0; it < 300; ++it) {
        std::size_t r = testgen::uniform(1, 5), c = testgen::uniform(1, 5);
        auto m = testgen::matrix(r, c, -6, 6);
        auto u = testgen::matrix(r, r, -2, 2);
        while (BigInt(abs(det(u))) != 1) u = testgen::matrix(r, r, -2, 2);
        REQUIRE(hnf(m) == hnf(u * m));
        REQUIRE(hnf(m).rows == rank(m));
    }
}

TEST_CASE("discriminant") {
    CHECK(discriminant(IntMatrix::identity(3)) == 1);
    CHECK(discriminant(IntMatrix::from_rows({{2, 0}})) == 4);
    CHECK(discriminant(IntMatrix::from_rows({{1, 2}, {2, 4}})) == 0);
}

TEST_CASE("dec_solve basic outcomes") {
    auto b = IntMatrix::from_rows({{3, 1, 4}, {1, 5, 9}, {2, 6, 5}});
    auto r = dec_solve(b.row(0), b);
    REQUIRE(std::holds_alternative<DecCoefficients>(r));
    CHECK(std::get<DecCoefficients>(r).z == Vec{1, 0, 0});

    auto half = dec_solve({1, 0}, IntMatrix::from_rows({{2, 0}, {0, 1}}));
    REQUIRE(std::holds_alternative<DecUndecided>(half));
    const auto& u = std::get<DecUndecided>(half);
    CHECK(u.reason == DecUndecided::Reason::rational_not_integral);
    // 1/2 = -50 + 51*101 - ... is the 101-adic expansion; its first digit is -50.
    CHECK(u.digits.front()[0] == -50);

    auto out = dec_solve({0, 0, 1}, IntMatrix::from_rows({{1, 0, 0}, {0, 1, 0}}));
    CHECK(std::holds_alternative<DecNotInSpan>(out));
}

TEST_CASE("dec_solve escalates the prime when the basis degenerates mod 101") {
    auto b = IntMatrix::from_rows({{101, 0}, {0, 1}});
    auto r = dec_solve({202, 3}, b);
    REQUIRE(std::holds_alternative<DecCoefficients>(r));
    CHECK(std::get<DecCoefficients>(r).z == Vec{2, 3});
    CHECK_THROWS_AS(dec_solve({1, 1}, IntMatrix::from_rows({{1, 1}, {2, 2}})), DomainError);
}

TEST_CASE("dec_solve matches exact elimination on random systems") {
    for (int it = 0; it < 200; ++it) {
        std::size_t m = testgen::uniform(1, 5), n = m + testgen::uniform(0, 3);
        auto b = independent_rows(m, n, -9, 9);
        Vec w;
        int kind = testgen::uniform(0, 2);
        if (kind == 0) {
            Vec z(m);
            for (auto& x : z) x = testgen::uniform(-20, 20);
            w = row_times(z, b);
        } else {
            w.resize(n);
            for (auto& x : w) x = testgen::uniform(-9, 9);
        }
        auto oracle = rational_solve_rows(b, w);
        auto r = dec_solve(w, b);
        if (!oracle.consistent) {
            REQUIRE(std::holds_alternative<DecNotInSpan>(r));
            continue;
        }
        bool integral = true;
        for (const auto& c : oracle.z) integral = integral && is_integral(c);
        if (integral) {
            REQUIRE(std::holds_alternative<DecCoefficients>(r));
            const auto& z = std::get<DecCoefficients>(r).z;
            for (std::size_t i = 0; i < m; ++i) REQUIRE(z[i] == oracle.z[i]);
        } else {
            REQUIRE(std::holds_alternative<DecUndecided>(r));
            REQUIRE(std::get<DecUndecided>(r).reason == DecUndecided::Reason::rational_not_integral);
        }
    }
}

TEST_CASE("fba examples") {
    auto r1 = fba({{1, 0}, {0, 1}});
    CHECK(r1.basis == std::vector<Vec>{{1, 0}, {0, 1}});
    auto r2 = fba({{1, 0}, {0, 1}, {1, 1}});
    CHECK(r2.basis == std::vector<Vec>{{1, 0}, {0, 1}});
    CHECK(r2.events.back().kind == 'a');

    auto r3 = fba({{2, 0}, {0, 1}, {1, 1}});
    CHECK(r3.basis == std::vector<Vec>{{1, 0}, {0, 1}});
    REQUIRE(r3.events.size() == 5);
    CHECK(r3.events[2].kind == 'd');
    CHECK(r3.events[2].disc_before == 4);
    CHECK(r3.events[2].disc_after == 1);
    CHECK(r3.events[3].kind == 'a');  // (1,1) is retried against the new basis
    CHECK(r3.events[4].kind == 'a');  // the displaced (2,0) is re-queued
    CHECK_THROWS_AS(fba({{1, -1}}), DomainError);
}

TEST_CASE("fba properties on random nonnegative generators") {
    for (int it = 0; it < 200; ++it) {
        std::size_t dim = testgen::uniform(1, 6), k = testgen::uniform(1, 8);
        std::vector<Vec> gens(k, Vec(dim));
        for (auto& g : gens)
            for (auto& x : g) x = testgen::uniform(0, 6);
        auto res = fba(gens);
        auto out = IntMatrix::from_rows(res.basis, dim);
        auto in = IntMatrix::from_rows(gens, dim);
        REQUIRE(nonneg(out));
        REQUIRE(rank(out) == out.rows);
        REQUIRE(hnf(out) == hnf(in));
        for (const auto& e : res.events) {
            if (e.kind == 'd') REQUIRE(e.disc_after < e.disc_before);
        }
    }
}

TEST_CASE("matrix text format") {
    std::istringstream in("2 3\n1 -2 3\n4 5 600000000000000000000\n");
    auto m = read_matrix(in);
    CHECK(m.rows == 2);
    CHECK(m(1, 2) == BigInt("600000000000000000000"));
    std::ostringstream out;
    write_matrix(out, m);
    std::istringstream back(out.str());
    CHECK(read_matrix(back) == m);
    std::istringstream bad("2 2\n1 2 3\n");
    CHECK_THROWS_AS(read_matrix(bad), FormatError);
}
