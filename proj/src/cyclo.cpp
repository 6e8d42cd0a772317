#include "moc/cyclo.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace moc {

long gcd_l(long a, long b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

long lcm_l(long a, long b) { return a / gcd_l(a, b) * b; }

long mod_l(long a, long n) {
    long r = a % n;
    return r < 0 ? r + n : r;
}

std::vector<std::pair<long, int>> factorize(long n) {
    std::vector<std::pair<long, int>> f;
    for (long p = 2; p * p <= n; ++p) {
        int k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        if (k) f.push_back({p, k});
    }
    if (n > 1) f.push_back({n, 1});
    return f;
}

long euler_phi(long n) {
    long r = n;
    for (auto [p, k] : factorize(n)) r = r / p * (p - 1);
    return r;
}

long mobius(long n) {
    long r = 1;
    for (auto [p, k] : factorize(n)) {
        if (k > 1) return 0;
        r = -r;
    }
    return r;
}

namespace {

struct PrimeComponent {
    long p, q, step, unit;  // q = p^k, step = p^(k-1), unit = 1 mod q and 0 mod n/q
};

struct Level {
    long n;
    std::vector<PrimeComponent> comps;
    std::vector<BigInt> one;  // reduced coordinates of 1
};

std::shared_ptr<const Level> level_info(long n) {
    static std::mutex mu;
    static std::map<long, std::shared_ptr<const Level>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto lv = std::make_shared<Level>();
    lv->n = n;
    for (auto [p, k] : factorize(n)) {
        PrimeComponent c{p, 1, 1, 0};
        for (int i = 0; i < k; ++i) c.q *= p;
        c.step = c.q / p;
        long rest = n / c.q;
        // rest * t = 1 mod q
        for (long t = 0; t < c.q; ++t)
            if (mod_l(rest * t, c.q) == 1 % c.q) {
                c.unit = mod_l(rest * t, n);
                break;
            }
        lv->comps.push_back(c);
    }
    cache[n] = lv;
    return lv;
}

void reduce(const Level& lv, std::vector<BigInt>& c) {
    const long n = lv.n;
    for (const auto& pc : lv.comps) {
        for (long e = 0; e < n; ++e) {
            if (c[e] == 0) continue;
            long comp = e % pc.q;
            long digit = comp / pc.step, r = comp % pc.step;
            bool kept = pc.p == 2 ? digit == 0 : digit != 0;
            if (kept) continue;
            BigInt v = c[e];
            c[e] = 0;
            if (pc.p == 2) {
                long e2 = mod_l(e + (r - comp) * pc.unit, n);
                c[e2] -= v;
            } else {
                for (long i = 1; i < pc.p; ++i) {
                    long e2 = mod_l(e + (r + i * pc.step - comp) * pc.unit, n);
                    c[e2] -= v;
                }
            }
        }
    }
}

const std::vector<BigInt>& one_coords(long n) {
    static std::mutex mu;
    static std::map<long, std::vector<BigInt>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<BigInt> c(n);
    c[0] = 1;
    reduce(*level_info(n), c);
    return cache.emplace(n, std::move(c)).first->second;
}

}  // namespace

Cyc Cyc::from_group_ring(long n, std::vector<BigInt> coeffs) {
    if (n < 1 || static_cast<long>(coeffs.size()) != n) throw DomainError("bad cyclotomic level");
    reduce(*level_info(n), coeffs);
    return Cyc(n, std::move(coeffs));
}

Cyc Cyc::integer(long n, const BigInt& v) {
    std::vector<BigInt> c(n);
    c[0] = v;
    return from_group_ring(n, std::move(c));
}

Cyc Cyc::root(long n, long e, const BigInt& coeff) {
    std::vector<BigInt> c(n);
    c[mod_l(e, n)] = coeff;
    return from_group_ring(n, std::move(c));
}

Cyc Cyc::at_level(long n) const {
    if (n == n_) return *this;
    if (n % n_ != 0) throw DomainError("cannot embed Q(zeta_" + std::to_string(n_) + ") into level " + std::to_string(n));
    long s = n / n_;
    std::vector<BigInt> c(n);
    for (long e = 0; e < n_; ++e)
        if (c_[e] != 0) c[e * s] = c_[e];
    return from_group_ring(n, std::move(c));
}

Cyc Cyc::operator+(const Cyc& o) const {
    long n = lcm_l(n_, o.n_);
    Cyc a = at_level(n), b = o.at_level(n);
    for (long e = 0; e < n; ++e) a.c_[e] += b.c_[e];
    return a;
}

Cyc Cyc::operator-() const {
    Cyc a = *this;
    for (auto& x : a.c_) x = -x;
    return a;
}

Cyc Cyc::operator-(const Cyc& o) const { return *this + (-o); }

Cyc Cyc::operator*(const Cyc& o) const {
    long n = lcm_l(n_, o.n_);
    Cyc a = at_level(n), b = o.at_level(n);
    std::vector<BigInt> c(n);
    for (long i = 0; i < n; ++i) {
        if (a.c_[i] == 0) continue;
        for (long j = 0; j < n; ++j)
            if (b.c_[j] != 0) c[(i + j) % n] += a.c_[i] * b.c_[j];
    }
    return from_group_ring(n, std::move(c));
}

Cyc Cyc::operator*(const BigInt& s) const {
    Cyc a = *this;
    for (auto& x : a.c_) x *= s;
    return a;
}

bool Cyc::operator==(const Cyc& o) const {
    if (n_ == o.n_) return c_ == o.c_;
    long n = lcm_l(n_, o.n_);
    return at_level(n).c_ == o.at_level(n).c_;
}

Cyc Cyc::galois(long k) const {
    if (gcd_l(k, n_) != 1) throw DomainError("Galois exponent not coprime to the level");
    std::vector<BigInt> c(n_);
    for (long e = 0; e < n_; ++e)
        if (c_[e] != 0) c[mod_l(e * k, n_)] = c_[e];
    return from_group_ring(n_, std::move(c));
}

bool Cyc::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool Cyc::as_integer(BigInt& out) const {
    const auto& one = one_coords(n_);
    long e0 = 0;
    while (one[e0] == 0) ++e0;
    BigInt v = c_[e0] / one[e0];
    for (long e = 0; e < n_; ++e)
        if (c_[e] != v * one[e]) return false;
    out = v;
    return true;
}

Cyc Cyc::div_exact(const BigInt& d) const {
    Cyc a = *this;
    for (auto& x : a.c_) {
        if (x % d != 0) throw DomainError("cyclotomic value not divisible by " + d.get_str());
        x /= d;
    }
    return a;
}

BigInt Cyc::trace() const {
    // Tr(zeta^e) is the Ramanujan sum mu(n/g) * phi(n) / phi(n/g), g = gcd(e, n).
    BigInt t = 0;
    long ph = euler_phi(n_);
    for (long e = 0; e < n_; ++e) {
        if (c_[e] == 0) continue;
        long m = n_ / gcd_l(e, n_);
        t += c_[e] * (mobius(m) * (ph / euler_phi(m)));
    }
    return t;
}

std::string Cyc::str() const {
    std::ostringstream os;
    bool first = true;
    for (long e = 0; e < n_; ++e) {
        if (c_[e] == 0) continue;
        if (!first) os << (c_[e] > 0 ? " + " : " - ");
        else if (c_[e] < 0) os << "-";
        BigInt a = abs(c_[e]);
        if (e == 0) os << a;
        else {
            if (a != 1) os << a << "*";
            os << "z" << n_ << "^" << e;
        }
        first = false;
    }
    return first ? "0" : os.str();
}

}  // namespace moc
