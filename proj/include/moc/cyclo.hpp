#pragma once

#include <string>
#include <vector>

#include "moc/exactnum.hpp"

namespace moc {

// Element of Z[zeta_n] stored by its coordinates in a fixed Z-basis of
// roots of unity: writing an exponent e through the Chinese remainder
// theorem as a tuple of components r + i*p^(k-1) modulo each p^k || n, the
// basis consists of the exponents whose digit i lies in {1, .., p-1} for odd
// p and equals 0 for p = 2. Every value is kept reduced to this basis, so
// equality is coordinatewise.
class Cyc {
public:
    Cyc() : n_(1), c_(1) {}
    static Cyc integer(long n, const BigInt& v);
    static Cyc root(long n, long e, const BigInt& coeff = 1);
    // Builds sum coeffs[e] * zeta_n^e for arbitrary (unreduced) coefficients.
    static Cyc from_group_ring(long n, std::vector<BigInt> coeffs);

    long level() const { return n_; }
    const std::vector<BigInt>& coords() const { return c_; }

    Cyc operator+(const Cyc& o) const;
    Cyc operator-(const Cyc& o) const;
    Cyc operator-() const;
    Cyc operator*(const Cyc& o) const;
    Cyc operator*(const BigInt& s) const;
    Cyc& operator+=(const Cyc& o) { return *this = *this + o; }
    bool operator==(const Cyc& o) const;
    bool operator!=(const Cyc& o) const { return !(*this == o); }

    // zeta -> zeta^k for k coprime to the level.
    Cyc galois(long k) const;
    Cyc conj() const { return galois(-1); }
    Cyc at_level(long n) const;
    bool is_zero() const;
    // Some value v with *this == v when the element is a rational integer.
    bool as_integer(BigInt& out) const;
    Cyc div_exact(const BigInt& d) const;
    // Trace from Q(zeta_n) down to Q.
    BigInt trace() const;
    std::string str() const;

private:
    Cyc(long n, std::vector<BigInt> c) : n_(n), c_(std::move(c)) {}
    long n_;
    std::vector<BigInt> c_;
};

long gcd_l(long a, long b);
long lcm_l(long a, long b);
long euler_phi(long n);
long mobius(long n);
std::vector<std::pair<long, int>> factorize(long n);
long mod_l(long a, long n);

}  // namespace moc
