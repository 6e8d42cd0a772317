#include "moc/exactnum.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace moc {

DivMod euclid_divmod(const BigInt& a, const BigInt& b) {
    if (b == 0) throw DomainError("division by zero");
    DivMod d;
    mpz_fdiv_qr(d.q.get_mpz_t(), d.r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (d.r < 0) {
        // Only reachable for b < 0: floor division leaves r in (b, 0].
        d.r -= b;
        d.q += 1;
    }
    return d;
}

BigInt floor_q(const Rational& x) {
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

BigInt ceil_q(const Rational& x) {
    BigInt r;
    mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

Rational make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw DomainError("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

bool is_integral(const Rational& x) { return x.get_den() == 1; }

BigInt parse_bigint(const std::string& s) {
    std::string t = s;
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    bool ok = !t.empty();
    for (std::size_t i = 0; i < t.size() && ok; ++i)
        ok = std::isdigit(static_cast<unsigned char>(t[i])) || (i == 0 && t[i] == '-' && t.size() > 1);
    if (!ok) throw FormatError("not an integer: '" + s + "'");
    return BigInt(t, 10);
}

std::string to_string(const BigInt& n) { return n.get_str(); }

std::string to_string(const Rational& x) { return x.get_str(); }

LegacyRecord legacy_encode(const BigInt& n) {
    BigInt m = abs(n);
    std::vector<std::int32_t> digits;  // least significant first
    do {
        BigInt r = m % 10000;
        digits.push_back(static_cast<std::int32_t>(r.get_si()));
        m /= 10000;
    } while (m != 0);
    digits[0] += n < 0 ? 20000 : 10000;
    std::reverse(digits.begin(), digits.end());
    return LegacyRecord{digits};
}

BigInt legacy_decode(const LegacyRecord& r) {
    const auto& w = r.words;
    if (w.empty()) throw FormatError("empty legacy record");
    if (w.size() > 1 && w.front() == 0) throw FormatError("legacy record has a leading zero word");
    BigInt n = 0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        if (w[i] < 0 || w[i] > 9999) throw FormatError("legacy digit out of range: " + std::to_string(w[i]));
        n = n * 10000 + w[i];
    }
    std::int32_t last = w.back();
    bool negative;
    if (last >= 10000 && last <= 19999) {
        negative = false;
        last -= 10000;
    } else if (last >= 20000 && last <= 29999) {
        negative = true;
        last -= 20000;
    } else {
        throw FormatError("bad legacy terminator word: " + std::to_string(last));
    }
    n = n * 10000 + last;
    if (negative && n == 0) throw FormatError("legacy record encodes negative zero");
    return negative ? BigInt(-n) : n;
}

std::string legacy_format(const LegacyRecord& r) {
    std::ostringstream os;
    for (std::size_t i = 0; i < r.words.size(); ++i) os << (i ? " " : "") << r.words[i];
    return os.str();
}

LegacyRecord legacy_take(const std::vector<std::int32_t>& words, std::size_t& pos) {
    LegacyRecord r;
    while (pos < words.size()) {
        std::int32_t w = words[pos++];
        r.words.push_back(w);
        if (w >= 10000) return r;
    }
    throw FormatError("legacy record without terminator word");
}

}  // namespace moc
