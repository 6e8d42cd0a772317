#include "moc/numfield.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace moc {

std::vector<long> GaloisSubgroup::elements() const {
    std::set<long> seen{mod_l(1, f)};
    std::vector<long> todo{mod_l(1, f)};
    while (!todo.empty()) {
        long x = todo.back();
        todo.pop_back();
        for (long g : generators) {
            long y = mod_l(x * g, f);
            if (seen.insert(y).second) todo.push_back(y);
        }
    }
    return {seen.begin(), seen.end()};
}

long GaloisSubgroup::degree() const { return euler_phi(f) / order(); }

bool GaloisSubgroup::contains(long a) const {
    auto el = elements();
    return std::binary_search(el.begin(), el.end(), mod_l(a, f));
}

std::vector<long> GaloisSubgroup::conductor_defects() const {
    std::vector<long> bad;
    const auto el = elements();
    for (auto [p, k] : factorize(f)) {
        // kernel of reduction mod f/p: units congruent to 1 mod f/p
        bool all = true;
        for (long a = 1; a < f && all; a += f / p)
            if (gcd_l(a, f) == 1) all = std::binary_search(el.begin(), el.end(), a);
        if (all) bad.push_back(p);
    }
    return bad;
}

GaloisSubgroup GaloisSubgroup::reduced() const {
    GaloisSubgroup g = *this;
    while (true) {
        auto bad = g.conductor_defects();
        if (bad.empty()) return g;
        long nf = g.f / bad.front();
        GaloisSubgroup h{nf, {}};
        for (long x : g.generators)
            if (mod_l(x, nf) != mod_l(1, nf)) h.generators.push_back(mod_l(x, nf));
        std::sort(h.generators.begin(), h.generators.end());
        h.generators.erase(std::unique(h.generators.begin(), h.generators.end()), h.generators.end());
        g = h;
    }
}

std::vector<long> GaloisSubgroup::galois_coset_reps() const {
    if (f == 1) return {1};
    auto el = elements();
    std::vector<bool> covered(f);
    std::vector<long> reps;
    for (long a = 1; a < f; ++a) {
        if (gcd_l(a, f) != 1 || covered[a]) continue;
        reps.push_back(a);
        for (long h : el) covered[mod_l(a * h, f)] = true;
    }
    return reps;
}

namespace {

std::vector<long> orbit_of(long e, long f, const std::vector<long>& h) {
    std::set<long> s;
    for (long x : h) s.insert(mod_l(e * x, f));
    return {s.begin(), s.end()};
}

Cyc orbit_sum(long e, long f, const std::vector<long>& h) {
    std::vector<BigInt> c(f);
    for (long x : orbit_of(e, f, h)) c[x] = 1;
    return Cyc::from_group_ring(f, std::move(c));
}

void require_conductor(const GaloisSubgroup& g) {
    for (long x : g.generators)
        if (gcd_l(x, g.f) != 1) throw DomainError("Galois generator " + std::to_string(x) + " not coprime to " + std::to_string(g.f));
    auto bad = g.conductor_defects();
    if (!bad.empty())
        throw DomainError(std::to_string(g.f) + " is not the conductor of the fixed field (prime " + std::to_string(bad.front()) + ")");
}

// Representative exponents of the orbit-sum integral basis.
std::vector<long> lenstra_reps(const GaloisSubgroup& g) {
    const long f = g.f;
    if (f == 1) return {0};
    const auto h = g.elements();
    long f0 = 1;
    for (auto [p, k] : factorize(f)) f0 *= p;

    std::vector<bool> seen(f);  // indexed by the smallest exponent of a class
    std::vector<long> labels;
    for (long e = 0; e < f; ++e) {
        long ord = f / gcd_l(e, f);
        if (ord % f0 != 0) continue;
        long d = 1;
        for (auto [p, k] : factorize(ord))
            if (k >= 2) d *= p;
        const long step = f / d;
        const long e0 = e % step;
        if (seen[e0]) continue;
        long stab = 0;
        for (long x : h) {
            long c = mod_l(e0 * x, f) % step;
            if (c == e0) ++stab;
            seen[c] = true;
        }
        if (stab > 2) throw std::logic_error("class stabilizer larger than the exceptional subgroup");
        if (stab == 2 && ord % 4 == 0) continue;  // the stabilizer acts as -1
        for (long i = 0; i < euler_phi(d); ++i) labels.push_back(orbit_of(e0 + i * step, f, h).front());
    }
    std::sort(labels.begin(), labels.end());
    if (static_cast<long>(labels.size()) != g.degree())
        throw std::logic_error("orbit-sum construction produced " + std::to_string(labels.size()) + " elements for degree " +
                               std::to_string(g.degree()));
    return labels;
}

}  // namespace

std::shared_ptr<const OrbitSumBasis> make_basis(const GaloisSubgroup& g, std::vector<long> reps, bool validate) {
    std::shared_ptr<OrbitSumBasis> b(new OrbitSumBasis());
    b->field_ = g;
    const long f = g.f;
    const auto h = g.elements();
    for (auto& r : reps) {
        r = mod_l(r, f);
        b->elems_.push_back(orbit_sum(r, f, h));
    }
    b->reps_ = std::move(reps);
    const std::size_t d = b->reps_.size();
    if (static_cast<long>(d) != g.degree())
        throw DomainError("expected " + std::to_string(g.degree()) + " basis representatives, got " + std::to_string(d));

    // Pivot columns of the coordinate matrix, by elimination over Q.
    RatMatrix m(d, f);
    for (std::size_t i = 0; i < d; ++i)
        for (long e = 0; e < f; ++e) m(i, e) = b->elems_[i].coords()[e];
    RatMatrix w = m;
    std::size_t r = 0;
    for (long c = 0; c < f && r < d; ++c) {
        std::size_t p = r;
        while (p < d && w(p, c) == 0) ++p;
        if (p == d) continue;
        for (long j = 0; j < f; ++j) std::swap(w(r, j), w(p, j));
        for (std::size_t i = r + 1; i < d; ++i) {
            if (w(i, c) == 0) continue;
            Rational t = w(i, c) / w(r, c);
            for (long j = c; j < f; ++j) w(i, j) -= t * w(r, j);
        }
        b->pivots_.push_back(c);
        ++r;
    }
    if (r != d) throw DomainError("orbit sums are linearly dependent");
    IntMatrix piv(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) piv(i, j) = b->elems_[i].coords()[b->pivots_[j]];
    b->pivot_inverse_ = *rational_inverse(piv);

    if (validate) {
        auto ref = orbit_sum_basis(g);
        IntMatrix t(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            auto c = ref->coordinates(b->elems_[i]);
            if (!c) throw DomainError("orbit sum of " + std::to_string(b->reps_[i]) + " is not integral over the field basis");
            t.set_row(i, *c);
        }
        BigInt dt = det(t);
        if (dt != 1 && dt != -1) throw DomainError("orbit sums span a sublattice of index " + to_string(BigInt(abs(dt))));
    }
    return b;
}

std::shared_ptr<const OrbitSumBasis> OrbitSumBasis::with_reps(const GaloisSubgroup& g, std::vector<long> reps) {
    require_conductor(g);
    return make_basis(g, std::move(reps), true);
}

BasisPtr orbit_sum_basis(const GaloisSubgroup& g, ConductorPolicy policy) {
    GaloisSubgroup h = g;
    if (policy == ConductorPolicy::reduce) {
        for (long x : g.generators)
            if (gcd_l(x, g.f) != 1) throw DomainError("Galois generator " + std::to_string(x) + " not coprime to " + std::to_string(g.f));
        h = g.reduced();
    }
    require_conductor(h);
    return make_basis(h, lenstra_reps(h), false);
}

std::vector<long> OrbitSumBasis::orbit(std::size_t i) const { return orbit_of(reps_[i], field_.f, field_.elements()); }

Cyc OrbitSumBasis::value(const Vec& coeffs) const {
    if (coeffs.size() != dim()) throw DomainError("coefficient vector has wrong length");
    Cyc s = Cyc::integer(field_.f, 0);
    for (std::size_t i = 0; i < dim(); ++i)
        if (coeffs[i] != 0) s += elems_[i] * coeffs[i];
    return s;
}

std::optional<Vec> OrbitSumBasis::coordinates(const Cyc& x) const {
    const long f = field_.f;
    if (f % x.level() != 0) return std::nullopt;
    Cyc y = x.at_level(f);
    const std::size_t d = dim();
    Vec z(d);
    for (std::size_t j = 0; j < d; ++j) {
        Rational s = 0;
        for (std::size_t i = 0; i < d; ++i) s += Rational(y.coords()[pivots_[i]]) * pivot_inverse_(i, j);
        if (!is_integral(s)) return std::nullopt;
        z[j] = s.get_num();
    }
    if (value(z) != y) return std::nullopt;
    return z;
}

IntMatrix OrbitSumBasis::galois_matrix(long k) const {
    IntMatrix m(dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        auto c = coordinates(elems_[i].galois(k));
        if (!c) throw std::logic_error("Galois image left the field");
        m.set_row(i, *c);
    }
    return m;
}

MultTable mult_table(const OrbitSumBasis& b) {
    MultTable t;
    t.d = b.dim();
    t.c.assign(t.d * t.d, Vec());
    for (std::size_t i = 0; i < t.d; ++i)
        for (std::size_t j = i; j < t.d; ++j) {
            auto c = b.coordinates(b.element(i) * b.element(j));
            if (!c) throw std::logic_error("product of basis elements is not integral in the basis");
            t.c[i * t.d + j] = *c;
            t.c[j * t.d + i] = *c;
        }
    return t;
}

FieldElement elem_mul(const FieldElement& x, const FieldElement& y, const MultTable& t) {
    if (x.basis != y.basis && !(x.basis && y.basis && x.basis->field().f == y.basis->field().f &&
                                x.basis->reps() == y.basis->reps() && x.basis->field().elements() == y.basis->field().elements()))
        throw DomainError("field elements over different bases");
    if (x.coeffs.size() != t.d || y.coeffs.size() != t.d) throw DomainError("coefficient vector has wrong length");
    Vec r(t.d);
    for (std::size_t i = 0; i < t.d; ++i) {
        if (x.coeffs[i] == 0) continue;
        for (std::size_t j = 0; j < t.d; ++j) {
            if (y.coeffs[j] == 0) continue;
            BigInt s = x.coeffs[i] * y.coeffs[j];
            const Vec& c = t.at(i, j);
            for (std::size_t k = 0; k < t.d; ++k) r[k] += s * c[k];
        }
    }
    return {x.basis, r};
}

FieldElement elem_mul(const FieldElement& x, const FieldElement& y) {
    if (!x.basis) throw DomainError("field element without basis");
    const auto& g = x.basis->field();
    auto e = default_registry().get(g, x.basis->reps());
    return elem_mul(x, y, *e.table);
}

IntMatrix trace_form(const OrbitSumBasis& b) {
    const std::size_t d = b.dim();
    const long h = b.field().order();
    IntMatrix t(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            BigInt tr = (b.element(i) * b.element(j)).trace();
            t(i, j) = t(j, i) = tr / h;
        }
    return t;
}

IntMatrix fixed_lattice(const GaloisSubgroup& g) {
    const long f = g.f;
    std::vector<long> kept;
    for (long e = 0; e < f; ++e) {
        auto c = Cyc::root(f, e).coords();
        if (c[e] == 1) kept.push_back(e);
    }
    const std::size_t n = kept.size(), ng = g.generators.size();
    IntMatrix a(n, n * ng + n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < ng; ++k) {
            Cyc diff = Cyc::root(f, kept[i] * g.generators[k]) - Cyc::root(f, kept[i]);
            for (std::size_t j = 0; j < n; ++j) a(i, k * n + j) = diff.coords()[kept[j]];
        }
        a(i, n * ng + i) = 1;
    }
    IntMatrix hf = hnf(a);
    IntMatrix out(0, f);
    for (std::size_t i = 0; i < hf.rows; ++i) {
        bool in_kernel = true;
        for (std::size_t j = 0; j < n * ng && in_kernel; ++j) in_kernel = hf(i, j) == 0;
        if (!in_kernel) continue;
        Vec v(f);
        for (std::size_t j = 0; j < n; ++j) v[kept[j]] = hf(i, n * ng + j);
        out.append_row(v);
    }
    return out;
}

namespace {

std::string key_of(const GaloisSubgroup& g, const std::vector<long>* reps) {
    std::vector<long> gens;
    for (long x : g.generators) gens.push_back(mod_l(x, g.f));
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    std::ostringstream os;
    os << g.f << ":";
    for (long x : gens) os << x << ",";
    if (reps) {
        os << "|";
        for (long r : *reps) os << r << ",";
    }
    return os.str();
}

}  // namespace

FieldRegistry::Entry FieldRegistry::insert(const std::string& key, BasisPtr b) {
    Entry e{b, std::make_shared<const MultTable>(mult_table(*b))};
    entries_[key] = e;
    return e;
}

FieldRegistry::Entry FieldRegistry::get(const GaloisSubgroup& g) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = key_of(g, nullptr);
    auto it = entries_.find(key);
    if (it != entries_.end()) return it->second;
    auto b = orbit_sum_basis(g);
    auto e = insert(key, b);
    entries_[key_of(g, &b->reps())] = e;
    return e;
}

FieldRegistry::Entry FieldRegistry::get(const GaloisSubgroup& g, const std::vector<long>& reps) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = key_of(g, &reps);
    auto it = entries_.find(key);
    if (it != entries_.end()) return it->second;
    return insert(key, OrbitSumBasis::with_reps(g, reps));
}

std::size_t FieldRegistry::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return entries_.size();
}

void FieldRegistry::save(std::ostream& out) const {
    std::lock_guard<std::mutex> lock(mu_);
    std::set<std::string> written;
    for (const auto& [key, e] : entries_) {
        const auto& g = e.basis->field();
        std::ostringstream line;
        line << g.f << " " << e.basis->dim() << " ";
        if (g.generators.empty()) line << "-";
        for (std::size_t i = 0; i < g.generators.size(); ++i) line << (i ? "," : "") << g.generators[i];
        for (long r : e.basis->reps()) line << " " << r;
        if (written.insert(line.str()).second) out << line.str() << "\n";
    }
}

void FieldRegistry::load(std::istream& in) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        long f, d;
        std::string gens;
        if (!(is >> f >> d >> gens) || f < 1) throw FormatError("field catalogue line " + std::to_string(lineno) + ": bad header");
        GaloisSubgroup g{f, {}};
        if (gens != "-") {
            std::istringstream gs(gens);
            std::string tok;
            while (std::getline(gs, tok, ',')) {
                try {
                    g.generators.push_back(std::stol(tok));
                } catch (const std::exception&) {
                    throw FormatError("field catalogue line " + std::to_string(lineno) + ": bad generator '" + tok + "'");
                }
            }
        }
        std::vector<long> reps;
        long r;
        while (is >> r) reps.push_back(r);
        if (!is.eof() || static_cast<long>(reps.size()) != d)
            throw FormatError("field catalogue line " + std::to_string(lineno) + ": expected " + std::to_string(d) + " representatives");
        auto b = OrbitSumBasis::with_reps(g, reps);
        std::lock_guard<std::mutex> lock(mu_);
        insert(key_of(g, &reps), b);
    }
}

FieldRegistry& default_registry() {
    static FieldRegistry reg;
    return reg;
}

}  // namespace moc
