#include "doctest.h"
#include "gen.hpp"

using namespace moc;

TEST_CASE("legacy codec worked encodings") {
    CHECK(legacy_encode(BigInt("123456789")).words == std::vector<std::int32_t>{1, 2345, 16789});
    CHECK(legacy_encode(BigInt("-123456789")).words == std::vector<std::int32_t>{1, 2345, 26789});
    CHECK(legacy_encode(0).words == std::vector<std::int32_t>{10000});
    CHECK(legacy_decode({{1, 2345, 16789}}) == 123456789);
    CHECK(legacy_decode({{1, 2345, 26789}}) == -123456789);
    CHECK(legacy_decode({{10000}}) == 0);
    CHECK(legacy_encode(10000).words == std::vector<std::int32_t>{1, 10000});
    CHECK(legacy_encode(-9999).words == std::vector<std::int32_t>{29999});
}

TEST_CASE("legacy codec rejects malformed records") {
    CHECK_THROWS_AS(legacy_decode({{}}), FormatError);
    CHECK_THROWS_AS(legacy_decode({{1, 2345}}), FormatError);       // no terminator
    CHECK_THROWS_AS(legacy_decode({{0, 16789}}), FormatError);      // leading zero word
    CHECK_THROWS_AS(legacy_decode({{12000, 10001}}), FormatError);  // digit out of range
    CHECK_THROWS_AS(legacy_decode({{30000}}), FormatError);
    CHECK_THROWS_AS(legacy_decode({{20000}}), FormatError);  // negative zero
}

TEST_CASE("legacy stream reading") {
    std::vector<std::int32_t> w{1, 2345, 16789, 20005, 10000};
    std::size_t pos = 0;
    CHECK(legacy_decode(legacy_take(w, pos)) == 123456789);
    CHECK(legacy_decode(legacy_take(w, pos)) == -5);
    CHECK(legacy_decode(legacy_take(w, pos)) == 0);
    CHECK(pos == w.size());
    CHECK_THROWS_AS(legacy_take(w, pos), FormatError);
}

TEST_CASE("legacy round trip on random integers") {
    for (int i = 0; i < 20000; ++i) {
        BigInt n = testgen::big(200);
        REQUIRE(legacy_decode(legacy_encode(n)) == n);
    }
}

TEST_CASE("euclidean division keeps the remainder nonnegative") {
    for (int i = 0; i < 2000; ++i) {
        BigInt a = testgen::big(30), b = testgen::big(12);
        auto [q, r] = euclid_divmod(a, b);
        REQUIRE(q * b + r == a);
        REQUIRE(r >= 0);
        REQUIRE(r < abs(b));
    }
    CHECK_THROWS_AS(euclid_divmod(1, 0), DomainError);
}

TEST_CASE("ring laws and reduced rationals") {
    for (int i = 0; i < 2000; ++i) {
        BigInt a = testgen::big(40), b = testgen::big(40), c = testgen::big(40);
        REQUIRE((a + b) + c == a + (b + c));
        REQUIRE((a * b) * c == a * (b * c));
        REQUIRE(a * b == b * a);
        REQUIRE(a * (b + c) == a * b + a * c);
        Rational x = make_rational(a, b), y = make_rational(c, b + (b == -1 ? 2 : 1));
        for (Rational z : std::vector<Rational>{x + y, x * y, x - y}) {
            REQUIRE(z.get_den() > 0);
            REQUIRE(gcd(z.get_num(), z.get_den()) == 1);
        }
    }
}

TEST_CASE("floor, ceiling and parsing") {
    CHECK(floor_q(make_rational(-7, 2)) == -4);
    CHECK(ceil_q(make_rational(-7, 2)) == -3);
    CHECK(floor_q(make_rational(6, 3)) == 2);
    CHECK(parse_bigint("-00120") == -120);
    CHECK_THROWS_AS(parse_bigint("12a"), FormatError);
    CHECK_THROWS_AS(parse_bigint(""), FormatError);
    CHECK(to_string(make_rational(4, -6)) == "-2/3");
}
