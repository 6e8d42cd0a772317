#include <sstream>

#include "../common/field_oracle.hpp"
#include "doctest.h"
#include "gen.hpp"

using namespace moc;

TEST_CASE("cyclotomic reduction and arithmetic") {
    Cyc z = Cyc::root(5, 1);
    CHECK((z * z * z * z * z) == Cyc::integer(5, 1));
    CHECK((z + z * z + z * z * z + z * z * z * z) == Cyc::integer(5, -1));
    // sqrt(5) as a Gauss sum
    Cyc s = Cyc::root(5, 1) - Cyc::root(5, 2) - Cyc::root(5, 3) + Cyc::root(5, 4);
    BigInt v;
    REQUIRE((s * s).as_integer(v));
    CHECK(v == 5);
    CHECK(s.conj() == s);
    // i * i = -1 at level 4 and inside level 12
    Cyc i = Cyc::root(4, 1);
    CHECK(i * i == Cyc::integer(4, -1));
    CHECK(i.at_level(12) * i.at_level(12) == Cyc::integer(12, -1));
    CHECK(Cyc::root(6, 3) == Cyc::integer(1, -1));
    CHECK(Cyc::root(12, 5).trace() == 0);
    CHECK(Cyc::integer(12, 3).trace() == 12);
    CHECK(Cyc::root(9, 3).trace() == -3);
    CHECK_FALSE(Cyc::root(5, 1).as_integer(v));
}

TEST_CASE("cyclotomic ring laws on random elements") {
    for (long n : {1L, 2L, 4L, 6L, 8L, 9L, 12L, 15L, 20L, 24L, 30L}) {
        for (int it = 0; it < 30; ++it) {
            auto rnd = [&] {
                std::vector<BigInt> c(n);
                for (auto& x : c) x = testgen::uniform(-3, 3);
                return Cyc::from_group_ring(n, c);
            };
            Cyc a = rnd(), b = rnd(), c = rnd();
            REQUIRE((a * b) * c == a * (b * c));
            REQUIRE(a * (b + c) == a * b + a * c);
            REQUIRE(a * b == b * a);
            REQUIRE(a.conj().conj() == a);
            REQUIRE((a * b).galois(n > 2 ? n - 1 : 1) == a.conj() * b.conj());
            REQUIRE((a + b).trace() == a.trace() + b.trace());
        }
    }
}

TEST_CASE("trivial field") {
    auto b = orbit_sum_basis({1, {}});
    CHECK(b->dim() == 1);
    CHECK(b->reps() == std::vector<long>{0});
    auto t = mult_table(*b);
    CHECK(t.at(0, 0) == Vec{1});
}

TEST_CASE("real quadratic field of conductor 5") {
    GaloisSubgroup g{5, {4}};
    auto b = orbit_sum_basis(g);
    REQUIRE(b->dim() == 2);
    CHECK(b->reps() == std::vector<long>{1, 2});
    CHECK(b->element(0) == Cyc::root(5, 1) + Cyc::root(5, 4));
    // (-1 + sqrt5)/2 computed from the Gauss sum
    Cyc s = Cyc::root(5, 1) - Cyc::root(5, 2) - Cyc::root(5, 3) + Cyc::root(5, 4);
    Cyc w = (s - Cyc::integer(5, 1)).div_exact(2);
    IntMatrix t(2, 2);
    t.set_row(0, *b->coordinates(Cyc::integer(5, 1)));
    t.set_row(1, *b->coordinates(w));
    CHECK(BigInt(abs(det(t))) == 1);
    CHECK(det(trace_form(*b)) == 5);
    CHECK_FALSE(b->coordinates(s.div_exact(1) * Cyc::root(5, 1)).has_value());
}

TEST_CASE("full cyclotomic field of conductor 5") {
    auto b = orbit_sum_basis({5, {}});
    CHECK(b->reps() == std::vector<long>{1, 2, 3, 4});
    IntMatrix t(4, 4);
    for (long e = 0; e < 4; ++e) t.set_row(e, *b->coordinates(Cyc::root(5, e)));
    CHECK(BigInt(abs(det(t))) == 1);
    CHECK(det(trace_form(*b)) == 125);
}

TEST_CASE("explicit representatives with the unit element") {
    GaloisSubgroup g{5, {4}};
    auto b = OrbitSumBasis::with_reps(g, {0, 1});
    CHECK(b->element(0) == Cyc::integer(5, 1));
    auto t = mult_table(*b);
    CHECK(t.at(1, 1) == Vec{1, -1});
    CHECK(t.at(0, 1) == Vec{0, 1});
    FieldElement x{b, {1, 0}}, y{b, {0, 1}};
    CHECK(elem_mul(x, y).coeffs == Vec{0, 1});
    CHECK(elem_mul(y, y).coeffs == Vec{1, -1});
    // {1, 1 + zeta + zeta^4} has index 1 too but the orbit sum of 0 twice does not
    CHECK_THROWS_AS(OrbitSumBasis::with_reps(g, {0, 0}), DomainError);
    CHECK_THROWS_AS(OrbitSumBasis::with_reps(g, {1}), DomainError);
}

TEST_CASE("conductor validation") {
    CHECK_THROWS_AS(orbit_sum_basis({10, {}}), DomainError);
    CHECK_THROWS_AS(orbit_sum_basis({15, {11}}), DomainError);  // fixed field lies in Q(zeta_5)
    auto r = orbit_sum_basis({15, {11}}, ConductorPolicy::reduce);
    CHECK(r->field().f == 5);
    CHECK(r->dim() == 4);
    auto q = orbit_sum_basis({10, {9}}, ConductorPolicy::reduce);
    CHECK(q->field().f == 5);
    CHECK(q->dim() == 2);
    CHECK_THROWS_AS(orbit_sum_basis({9, {3}}), DomainError);
}

TEST_CASE("exceptional stabilizer cases at conductor 16 and 24") {
    for (long f : {8L, 16L, 24L, 40L}) {
        for (auto& g : oracle::conductor_fields(f)) {
            auto b = orbit_sum_basis(g);
            REQUIRE(b->dim() == static_cast<std::size_t>(g.degree()));
            IntMatrix rows(0, f);
            for (std::size_t i = 0; i < b->dim(); ++i) rows.append_row(b->element(i).coords());
            REQUIRE(same_row_lattice(rows, fixed_lattice(g)));
        }
    }
}

TEST_CASE("discriminants of all abelian fields of small conductor") {
    for (long f = 1; f <= 40; ++f) {
        if (f % 4 == 2) continue;
        for (auto& g : oracle::conductor_fields(f)) {
            auto b = orbit_sum_basis(g);
            CAPTURE(f);
            CAPTURE(g.generators.size());
            REQUIRE(det(trace_form(*b)) == oracle::discriminant(g));
        }
    }
}

TEST_CASE("multiplication laws and conjugation") {
    for (auto g : std::vector<GaloisSubgroup>{{5, {4}}, {7, {2}}, {13, {3}}, {12, {}}, {21, {4}}, {16, {7}}}) {
        auto b = orbit_sum_basis(g);
        auto t = mult_table(*b);
        std::size_t d = b->dim();
        auto rnd = [&] {
            Vec c(d);
            for (auto& x : c) x = testgen::uniform(-5, 5);
            return FieldElement{b, c};
        };
        auto one = *b->coordinates(Cyc::integer(g.f, 1));
        for (int it = 0; it < 170; ++it) {
            auto x = rnd(), y = rnd(), z = rnd();
            REQUIRE(elem_mul(x, y, t).coeffs == elem_mul(y, x, t).coeffs);
            REQUIRE(elem_mul(elem_mul(x, y, t), z, t).coeffs == elem_mul(x, elem_mul(y, z, t), t).coeffs);
            REQUIRE(elem_mul(x, {b, one}, t).coeffs == x.coeffs);
            REQUIRE(b->value(elem_mul(x, y, t).coeffs) == b->value(x.coeffs) * b->value(y.coeffs));
        }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) REQUIRE(t.at(i, j) == t.at(j, i));
        auto c = b->galois_matrix(-1);
        REQUIRE(c * c == IntMatrix::identity(d));
        for (std::size_t i = 0; i < d; ++i) {
            // the conjugate of an orbit sum is the orbit sum of -e, which is
            // a basis element up to sign or an integral combination of them
            REQUIRE(b->value(c.row(i)) == b->element(i).conj());
            Vec row = c.row(i);
            std::size_t nz = 0;
            for (const auto& x : row) nz += x != 0;
            if (nz == 1) {
                std::size_t k = 0;
                while (row[k] == 0) ++k;
                REQUIRE(BigInt(abs(row[k])) == 1);
                auto ok = b->orbit(k);
                if (row[k] == 1) REQUIRE(std::binary_search(ok.begin(), ok.end(), mod_l(-b->reps()[i], g.f)));
            }
        }
    }
}

TEST_CASE("field registry catalogue round trip") {
    FieldRegistry reg;
    auto e1 = reg.get({5, {4}}, {0, 1});
    auto e2 = reg.get({7, {2}});
    CHECK(reg.get({5, {4}}, {0, 1}).basis == e1.basis);
    std::ostringstream out;
    reg.save(out);
    FieldRegistry back;
    std::istringstream in(out.str());
    back.load(in);
    CHECK(back.get({5, {4}}, {0, 1}).basis->reps() == e1.basis->reps());
    CHECK(back.get({7, {2}}, e2.basis->reps()).table->c == e2.table->c);
    std::istringstream bad("5 2 4 0\n");
    CHECK_THROWS_AS(back.load(bad), FormatError);
}
