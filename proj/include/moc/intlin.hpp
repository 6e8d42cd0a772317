#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "moc/exactnum.hpp"

namespace moc {

struct IntMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<BigInt> a;

    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
    static IntMatrix from_rows(const std::vector<Vec>& rs, std::size_t cols_if_empty = 0);
    static IntMatrix identity(std::size_t n);

    BigInt& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const BigInt& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
    Vec row(std::size_t i) const;
    Vec col(std::size_t j) const;
    void set_row(std::size_t i, const Vec& v);
    void append_row(const Vec& v);
    std::vector<Vec> to_rows() const;
    bool operator==(const IntMatrix&) const = default;
};

struct RatMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Rational> a;
    RatMatrix() = default;
    RatMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
    explicit RatMatrix(const IntMatrix& m);
    Rational& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

IntMatrix transpose(const IntMatrix& m);
IntMatrix operator*(const IntMatrix& x, const IntMatrix& y);
Vec row_times(const Vec& v, const IntMatrix& m);   // v * m
Vec times_col(const IntMatrix& m, const Vec& v);   // m * v
BigInt dot(const Vec& x, const Vec& y);
Vec operator+(const Vec& x, const Vec& y);
Vec operator-(const Vec& x, const Vec& y);
Vec scaled(const Vec& x, const BigInt& s);
bool is_zero(const Vec& v);
bool nonneg(const Vec& v);
bool nonneg(const IntMatrix& m);

BigInt det(const IntMatrix& m);        // fraction-free elimination
std::size_t rank(const IntMatrix& m);  // rank over Q
std::optional<IntMatrix> unimodular_inverse(const IntMatrix& m);
std::optional<RatMatrix> rational_inverse(const IntMatrix& m);

// Row Hermite normal form of the row lattice; zero rows are dropped.
IntMatrix hnf(const IntMatrix& m);
bool same_row_lattice(const IntMatrix& x, const IntMatrix& y);

// Solves z * T = w over Q. `unique` is false when the rows of T are
// dependent; z is then one particular solution.
struct RationalSolve {
    bool consistent = false;
    bool unique = false;
    QVec z;
};
RationalSolve rational_solve_rows(const IntMatrix& t, const Vec& w);

// Outcome of the q-adic solver.
struct DecCoefficients {
    Vec z;
};
struct DecNotInSpan {};
struct DecUndecided {
    enum class Reason { max_iterations, rational_not_integral } reason;
    std::vector<Vec> digits;  // q-adic digit vectors, least significant first
    BigInt prime;
};
using DecOutcome = std::variant<DecCoefficients, DecNotInSpan, DecUndecided>;

struct DecOptions {
    long q = 101;
    int maxj = 20;
    int prime_attempts = 10;
    std::size_t oracle_max_cols = 64;
};

DecOutcome dec_solve(const Vec& w, const IntMatrix& basis, const DecOptions& opt = {});

// Helpers exposed for the basis-construction algorithm and tests.
long next_prime(long n);
bool independent_mod(const IntMatrix& t, long q);

struct FbaEvent {
    char kind;           // 'a', 'b', 'c' or 'd'
    BigInt disc_before;  // discriminant of the working set
    BigInt disc_after;
};
struct FbaResult {
    std::vector<Vec> basis;
    std::vector<FbaEvent> events;
};
FbaResult fba(const std::vector<Vec>& generators, const DecOptions& opt = {});

// det(M * M^t) of the row matrix; 0 for dependent rows.
BigInt discriminant(const IntMatrix& b);

// "rows cols" header followed by row-major decimal integers.
IntMatrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const IntMatrix& m);

}  // namespace moc
