#include "moc/intlin.hpp"

#include <istream>
#include <numeric>
#include <ostream>

namespace moc {

IntMatrix IntMatrix::from_rows(const std::vector<Vec>& rs, std::size_t cols_if_empty) {
    IntMatrix m(rs.size(), rs.empty() ? cols_if_empty : rs[0].size());
    for (std::size_t i = 0; i < rs.size(); ++i) m.set_row(i, rs[i]);
    return m;
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Vec IntMatrix::row(std::size_t i) const { return Vec(a.begin() + i * cols, a.begin() + (i + 1) * cols); }

Vec IntMatrix::col(std::size_t j) const {
    Vec v(rows);
    for (std::size_t i = 0; i < rows; ++i) v[i] = (*this)(i, j);
    return v;
}

void IntMatrix::set_row(std::size_t i, const Vec& v) {
    if (v.size() != cols) throw DomainError("row length mismatch");
    std::copy(v.begin(), v.end(), a.begin() + i * cols);
}

void IntMatrix::append_row(const Vec& v) {
    if (rows == 0 && cols == 0) cols = v.size();
    if (v.size() != cols) throw DomainError("row length mismatch");
    a.insert(a.end(), v.begin(), v.end());
    ++rows;
}

std::vector<Vec> IntMatrix::to_rows() const {
    std::vector<Vec> r;
    for (std::size_t i = 0; i < rows; ++i) r.push_back(row(i));
    return r;
}

RatMatrix::RatMatrix(const IntMatrix& m) : rows(m.rows), cols(m.cols), a(m.a.begin(), m.a.end()) {}

IntMatrix transpose(const IntMatrix& m) {
    IntMatrix t(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
    if (x.cols != y.rows) throw DomainError("matrix dimension mismatch");
    IntMatrix r(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            if (x(i, k) == 0) continue;
            for (std::size_t j = 0; j < y.cols; ++j) r(i, j) += x(i, k) * y(k, j);
        }
    return r;
}

Vec row_times(const Vec& v, const IntMatrix& m) {
    if (v.size() != m.rows) throw DomainError("vector/matrix dimension mismatch");
    Vec r(m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) {
        if (v[i] == 0) continue;
        for (std::size_t j = 0; j < m.cols; ++j) r[j] += v[i] * m(i, j);
    }
    return r;
}

Vec times_col(const IntMatrix& m, const Vec& v) {
    if (v.size() != m.cols) throw DomainError("matrix/vector dimension mismatch");
    Vec r(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) r[i] += m(i, j) * v[j];
    return r;
}

BigInt dot(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw DomainError("vector length mismatch");
    BigInt s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

Vec operator+(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw DomainError("vector length mismatch");
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return r;
}

Vec operator-(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw DomainError("vector length mismatch");
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

Vec scaled(const Vec& x, const BigInt& s) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] * s;
    return r;
}

bool is_zero(const Vec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

bool nonneg(const Vec& v) {
    for (const auto& x : v)
        if (x < 0) return false;
    return true;
}

bool nonneg(const IntMatrix& m) {
    for (const auto& x : m.a)
        if (x < 0) return false;
    return true;
}

BigInt det(const IntMatrix& m) {
    if (m.rows != m.cols) throw DomainError("determinant of a non-square matrix");
    std::size_t n = m.rows;
    if (n == 0) return 1;
    IntMatrix a = m;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                BigInt t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    BigInt d = a(n - 1, n - 1);
    return sign > 0 ? d : BigInt(-d);
}

std::size_t rank(const IntMatrix& m) {
    IntMatrix a = m;
    std::size_t r = 0;
    BigInt prev = 1;
    for (std::size_t c = 0; c < a.cols && r < a.rows; ++c) {
        std::size_t p = r;
        while (p < a.rows && a(p, c) == 0) ++p;
        if (p == a.rows) continue;
        if (p != r)
            for (std::size_t j = 0; j < a.cols; ++j) std::swap(a(r, j), a(p, j));
        for (std::size_t i = r + 1; i < a.rows; ++i) {
            for (std::size_t j = c + 1; j < a.cols; ++j) {
                BigInt t = a(i, j) * a(r, c) - a(i, c) * a(r, j);
                mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a(i, c) = 0;
        }
        prev = a(r, c);
        ++r;
    }
    return r;
}

std::optional<RatMatrix> rational_inverse(const IntMatrix& m) {
    if (m.rows != m.cols) throw DomainError("inverse of a non-square matrix");
    std::size_t n = m.rows;
    RatMatrix a(m), inv(n, n);
    for (std::size_t i = 0; i < n; ++i) inv(i, i) = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a(p, c) == 0) ++p;
        if (p == n) return std::nullopt;
        if (p != c)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(c, j), a(p, j));
                std::swap(inv(c, j), inv(p, j));
            }
        Rational piv = a(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            a(c, j) /= piv;
            inv(c, j) /= piv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a(i, c) == 0) continue;
            Rational f = a(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(c, j);
                inv(i, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

std::optional<IntMatrix> unimodular_inverse(const IntMatrix& m) {
    auto inv = rational_inverse(m);
    if (!inv) return std::nullopt;
    IntMatrix r(m.rows, m.cols);
    for (std::size_t k = 0; k < r.a.size(); ++k) {
        if (!is_integral(inv->a[k])) return std::nullopt;
        r.a[k] = inv->a[k].get_num();
    }
    return r;
}

IntMatrix hnf(const IntMatrix& m) {
    IntMatrix a = m;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols && r < a.rows; ++c) {
        while (true) {
            std::size_t best = a.rows;
            for (std::size_t i = r; i < a.rows; ++i)
                if (a(i, c) != 0 && (best == a.rows || abs(a(i, c)) < abs(a(best, c)))) best = i;
            if (best == a.rows) break;
            if (best != r)
                for (std::size_t j = 0; j < a.cols; ++j) std::swap(a(r, j), a(best, j));
            bool done = true;
            for (std::size_t i = r + 1; i < a.rows; ++i) {
                if (a(i, c) == 0) continue;
                BigInt q = euclid_divmod(a(i, c), a(r, c)).q;
                for (std::size_t j = c; j < a.cols; ++j) a(i, j) -= q * a(r, j);
                if (a(i, c) != 0) done = false;
            }
            if (done) break;
        }
        if (r >= a.rows || a(r, c) == 0) continue;
        if (a(r, c) < 0)
            for (std::size_t j = c; j < a.cols; ++j) a(r, j) = -a(r, j);
        for (std::size_t i = 0; i < r; ++i) {
            BigInt q = euclid_divmod(a(i, c), a(r, c)).q;
            if (q != 0)
                for (std::size_t j = c; j < a.cols; ++j) a(i, j) -= q * a(r, j);
        }
        ++r;
    }
    IntMatrix out(r, a.cols);
    std::copy(a.a.begin(), a.a.begin() + r * a.cols, out.a.begin());
    return out;
}

bool same_row_lattice(const IntMatrix& x, const IntMatrix& y) { return hnf(x) == hnf(y); }

RationalSolve rational_solve_rows(const IntMatrix& t, const Vec& w) {
    // Unknowns z_1..z_m; equations sum_i z_i t(i, j) = w_j for each column j.
    std::size_t m = t.rows, n = t.cols;
    if (w.size() != n) throw DomainError("right-hand side length mismatch");
    RatMatrix a(n, m + 1);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) a(j, i) = t(i, j);
        a(j, m) = w[j];
    }
    std::vector<std::size_t> pivcol;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m && r < n; ++c) {
        std::size_t p = r;
        while (p < n && a(p, c) == 0) ++p;
        if (p == n) continue;
        if (p != r)
            for (std::size_t j = 0; j <= m; ++j) std::swap(a(r, j), a(p, j));
        Rational piv = a(r, c);
        for (std::size_t j = c; j <= m; ++j) a(r, j) /= piv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r || a(i, c) == 0) continue;
            Rational f = a(i, c);
            for (std::size_t j = c; j <= m; ++j) a(i, j) -= f * a(r, j);
        }
        pivcol.push_back(c);
        ++r;
    }
    RationalSolve s;
    for (std::size_t i = r; i < n; ++i)
        if (a(i, m) != 0) return s;
    s.consistent = true;
    s.unique = r == m;
    s.z.assign(m, Rational(0));
    for (std::size_t k = 0; k < r; ++k) s.z[pivcol[k]] = a(k, m);
    return s;
}

long next_prime(long n) {
    auto is_prime = [](long x) {
        if (x < 2) return false;
        for (long d = 2; d * d <= x; ++d)
            if (x % d == 0) return false;
        return true;
    };
    long p = n + 1;
    while (!is_prime(p)) ++p;
    return p;
}

namespace {

long mod_of(const BigInt& x, long q) {
    BigInt r = euclid_divmod(x, q).r;
    return r.get_si();
}

long inv_mod(long a, long q) {
    long t = 0, nt = 1, r = q, nr = a % q;
    while (nr != 0) {
        long k = r / nr;
        long tmp = t - k * nt;
        t = nt;
        nt = tmp;
        tmp = r - k * nr;
        r = nr;
        nr = tmp;
    }
    return t < 0 ? t + q : t;
}

long symmetric(long r, long q) { return r > (q - 1) / 2 ? r - q : r; }

// Pivot columns of t mod q, or empty optional when the rank drops.
std::optional<std::vector<std::size_t>> pivot_columns_mod(const IntMatrix& t, long q) {
    std::size_t m = t.rows, n = t.cols;
    std::vector<std::vector<long>> a(m, std::vector<long>(n));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = mod_of(t(i, j), q);
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t p = r;
        while (p < m && a[p][c] == 0) ++p;
        if (p == m) continue;
        std::swap(a[r], a[p]);
        long inv = inv_mod(a[r][c], q);
        for (std::size_t j = c; j < n; ++j) a[r][j] = a[r][j] * inv % q;
        for (std::size_t i = r + 1; i < m; ++i) {
            long f = a[i][c];
            if (f == 0) continue;
            for (std::size_t j = c; j < n; ++j) a[i][j] = ((a[i][j] - f * a[r][j]) % q + q) % q;
        }
        piv.push_back(c);
        ++r;
    }
    if (r < m) return std::nullopt;
    return piv;
}

// Inverse of the square submatrix t[:, cols] modulo q.
std::vector<std::vector<long>> inverse_mod(const IntMatrix& t, const std::vector<std::size_t>& cols, long q) {
    std::size_t m = t.rows;
    std::vector<std::vector<long>> a(m, std::vector<long>(2 * m, 0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k) a[i][k] = mod_of(t(i, cols[k]), q);
        a[i][m + i] = 1;
    }
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t p = c;
        while (a[p][c] == 0) ++p;
        std::swap(a[c], a[p]);
        long inv = inv_mod(a[c][c], q);
        for (auto& x : a[c]) x = x * inv % q;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == c || a[i][c] == 0) continue;
            long f = a[i][c];
            for (std::size_t j = 0; j < 2 * m; ++j) a[i][j] = ((a[i][j] - f * a[c][j]) % q + q) % q;
        }
    }
    std::vector<std::vector<long>> r(m, std::vector<long>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) r[i][k] = a[i][m + k];
    return r;
}

}  // namespace

bool independent_mod(const IntMatrix& t, long q) { return pivot_columns_mod(t, q).has_value(); }

DecOutcome dec_solve(const Vec& w, const IntMatrix& basis, const DecOptions& opt) {
    const std::size_t m = basis.rows, n = basis.cols;
    if (w.size() != n) throw DomainError("dec_solve: vector length does not match basis");
    if (m == 0) {
        if (is_zero(w)) return DecCoefficients{Vec{}};
        return DecNotInSpan{};
    }

    long q = opt.q;
    std::optional<std::vector<std::size_t>> piv;
    for (int attempt = 0; attempt < opt.prime_attempts; ++attempt) {
        piv = pivot_columns_mod(basis, q);
        if (piv) break;
        q = next_prime(q);
    }
    if (!piv) throw DomainError("dec_solve: basis is rank-deficient modulo every tried prime");
    auto cinv = inverse_mod(basis, *piv, q);

    Vec v = w, z(m);
    BigInt qpow = 1;
    std::vector<Vec> digits;
    for (int j = 0; j <= opt.maxj; ++j) {
        if (is_zero(v)) return DecCoefficients{z};
        // Step 1: residues on the pivot columns determine the digit vector;
        // the remaining columns are checked by the divisibility below.
        std::vector<long> vs(m);
        for (std::size_t k = 0; k < m; ++k) vs[k] = mod_of(v[(*piv)[k]], q);
        Vec y(m);
        for (std::size_t i = 0; i < m; ++i) {
            long s = 0;
            for (std::size_t k = 0; k < m; ++k) s = (s + vs[k] * cinv[k][i]) % q;
            y[i] = symmetric(s, q);
        }
        Vec rem = v - row_times(y, basis);
        for (const auto& x : rem)
            if (euclid_divmod(x, q).r != 0) return DecNotInSpan{};
        for (auto& x : rem) mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(q));
        for (std::size_t i = 0; i < m; ++i) z[i] += y[i] * qpow;
        digits.push_back(y);
        qpow *= q;
        v = std::move(rem);
    }
    if (is_zero(v)) return DecCoefficients{z};

    DecUndecided u{DecUndecided::Reason::max_iterations, digits, BigInt(q)};
    if (n <= opt.oracle_max_cols) {
        auto s = rational_solve_rows(basis, w);
        if (!s.consistent) return DecNotInSpan{};
        for (const auto& c : s.z)
            if (!is_integral(c)) {
                u.reason = DecUndecided::Reason::rational_not_integral;
                break;
            }
    }
    return u;
}

BigInt discriminant(const IntMatrix& b) { return det(b * transpose(b)); }

FbaResult fba(const std::vector<Vec>& generators, const DecOptions& opt) {
    FbaResult res;
    std::vector<Vec> queue = generators;
    std::vector<Vec>& bt = res.basis;
    long q = opt.q;
    auto as_matrix = [&](const std::vector<Vec>& rows) {
        return IntMatrix::from_rows(rows, generators.empty() ? 0 : generators[0].size());
    };
    for (std::size_t s = 0; s < queue.size();) {
        const Vec theta = queue[s];
        if (!nonneg(theta)) throw DomainError("fba: generators must be componentwise nonnegative");
        IntMatrix cur = as_matrix(bt);
        BigInt disc_before = bt.empty() ? BigInt(1) : discriminant(cur);

        DecOptions o = opt;
        o.q = q;
        o.prime_attempts = 1;
        if (!bt.empty()) {
            auto d = dec_solve(theta, cur, o);
            if (std::holds_alternative<DecCoefficients>(d)) {
                res.events.push_back({'a', disc_before, disc_before});
                ++s;
                continue;
            }
        } else if (is_zero(theta)) {
            res.events.push_back({'a', disc_before, disc_before});
            ++s;
            continue;
        }

        auto sol = rational_solve_rows(cur, theta);
        if (bt.empty() || !sol.consistent) {
            std::vector<Vec> ext = bt;
            ext.push_back(theta);
            IntMatrix em = as_matrix(ext);
            char kind = 'b';
            if (!independent_mod(em, q)) {
                kind = 'c';
                do q = next_prime(q);
                while (!independent_mod(em, q));
            }
            bt = std::move(ext);
            res.events.push_back({kind, disc_before, discriminant(as_matrix(bt))});
            ++s;
            continue;
        }

        // Case (d): theta lies in the rational span only.
        BigInt m1 = 1;
        for (const auto& c : sol.z) mpz_lcm(m1.get_mpz_t(), m1.get_mpz_t(), c.get_den_mpz_t());
        std::size_t k = bt.size();
        Vec zi(k);
        for (std::size_t i = 0; i < k; ++i) zi[i] = Rational(sol.z[i] * m1).get_num();
        std::size_t j = 0;
        BigInt mbest = 0;
        for (std::size_t i = 0; i < k; ++i) {
            BigInt g = gcd(m1, zi[i]);
            if (i == 0 || g < mbest) {
                mbest = g;
                j = i;
            }
        }
        // m = a*m1 + b*z_j with b normalized into [0, m1/m).
        BigInt g, a, b;
        mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(), m1.get_mpz_t(), zi[j].get_mpz_t());
        BigInt period = m1 / g;
        b = euclid_divmod(b, period).r;
        a = (g - b * zi[j]) / m1;
        Vec tilde = scaled(theta, b) + scaled(bt[j], a);
        for (std::size_t i = 0; i < k; ++i) {
            if (i == j) continue;
            BigInt ci = ceil_q(make_rational(-b * zi[i], m1));
            tilde = tilde + scaled(bt[i], ci);
        }
        queue.push_back(bt[j]);
        bt[j] = tilde;
        res.events.push_back({'d', disc_before, discriminant(as_matrix(bt))});
    }
    return res;
}

IntMatrix read_matrix(std::istream& in) {
    std::string r, c;
    if (!(in >> r >> c)) throw FormatError("matrix header 'rows cols' expected");
    long rows = parse_bigint(r).get_si(), cols = parse_bigint(c).get_si();
    if (rows < 0 || cols < 0) throw FormatError("negative matrix dimension");
    IntMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    for (auto& x : m.a) {
        std::string tok;
        if (!(in >> tok)) throw FormatError("matrix data truncated");
        x = parse_bigint(tok);
    }
    return m;
}

void write_matrix(std::ostream& out, const IntMatrix& m) {
    out << m.rows << ' ' << m.cols << '\n';
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) out << (j ? " " : "") << m(i, j);
        out << '\n';
    }
}

}  // namespace moc
