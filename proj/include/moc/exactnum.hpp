#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "moc/error.hpp"

namespace moc {

using BigInt = mpz_class;
using Rational = mpq_class;
using Vec = std::vector<BigInt>;
using QVec = std::vector<Rational>;

// Quotient and remainder with 0 <= r < |b|.
struct DivMod {
    BigInt q, r;
};
DivMod euclid_divmod(const BigInt& a, const BigInt& b);

// Floor and ceiling of a rational number.
BigInt floor_q(const Rational& x);
BigInt ceil_q(const Rational& x);

Rational make_rational(const BigInt& num, const BigInt& den);
bool is_integral(const Rational& x);

BigInt parse_bigint(const std::string& s);
std::string to_string(const BigInt& n);
std::string to_string(const Rational& x);

// Base-10^4 wire format of the original file layout. The last word
// carries a_0 + 10000 for n >= 0 and -a_0 + 20000 for n < 0; the words in
// front are the remaining digits, most significant first.
struct LegacyRecord {
    std::vector<std::int32_t> words;
    bool operator==(const LegacyRecord&) const = default;
};

LegacyRecord legacy_encode(const BigInt& n);
BigInt legacy_decode(const LegacyRecord& r);

// Whitespace separated words of a single record.
std::string legacy_format(const LegacyRecord& r);

// Reads one record from a flat word stream starting at pos and advances
// pos past the terminator word.
LegacyRecord legacy_take(const std::vector<std::int32_t>& words, std::size_t& pos);

}  // namespace moc
