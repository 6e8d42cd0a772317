#include "moc/charops.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace moc {

namespace {

void same_table(const ClassFunction& x, const ClassFunction& y) {
    if (!x.table || x.table != y.table) throw DomainError("class functions belong to different tables");
}

CharKind combine_kind(const ClassFunction& x, const ClassFunction& y) {
    if (x.kind == y.kind) return x.kind;
    return CharKind::virtual_;
}

bool projective(const ClassFunction& x) { return x.kind == CharKind::projective; }

// Sum over a usual-value vector with rational weights: returns the integral
// cyclotomic values or throws.
ClassFunction from_values(const TablePtr& t, const std::vector<Cyc>& vals, CharKind kind, long p) {
    ClassFunction r;
    r.table = t;
    r.kind = kind;
    r.p = p;
    r.coeffs = from_usual(*t, {vals})[0];
    return r;
}

std::mutex sym_mu;
std::map<std::pair<int, long>, SymmetrizationData>& sym_store() {
    static std::map<std::pair<int, long>, SymmetrizationData> s;
    return s;
}

SymmetrizationData builtin(int r) {
    SymmetrizationData d;
    d.r = r;
    if (r == 1) {
        d.partitions = {{1}};
        d.centralizers = {1};
        d.irr = IntMatrix::from_rows({{1}});
    } else if (r == 2) {
        d.partitions = {{1, 1}, {2}};
        d.centralizers = {2, 2};
        d.irr = IntMatrix::from_rows({{1, -1}, {1, 1}});
    } else if (r == 3) {
        d.partitions = {{1, 1, 1}, {2, 1}, {3}};
        d.centralizers = {6, 2, 3};
        d.irr = IntMatrix::from_rows({{1, -1, 1}, {2, 0, -1}, {1, 1, 1}});
    }
    return d;
}

void ensure_builtin() {
    auto& s = sym_store();
    if (!s.empty()) return;
    for (int r = 1; r <= 3; ++r) s[{r, 0}] = builtin(r);
    auto d = builtin(3);
    d.p = 3;
    d.m = IntMatrix::from_rows({{1, 0, 0}, {1, 1, 0}, {0, 1, 1}});
    d.sigma = IntMatrix::from_rows({{1, -1, 1}, {1, 1, -2}, {0, 0, 3}});
    s[{3, 3}] = d;
}

}  // namespace

ClassFunction ClassFunction::row(const TablePtr& t, std::size_t i) {
    ClassFunction c;
    c.table = t;
    c.coeffs = t->rows.at(i);
    c.kind = t->prime ? CharKind::brauer : CharKind::ordinary;
    c.p = t->prime;
    return c;
}

ClassFunction ClassFunction::operator+(const ClassFunction& o) const {
    same_table(*this, o);
    ClassFunction r = *this;
    r.coeffs = coeffs + o.coeffs;
    r.kind = combine_kind(*this, o);
    if (r.kind == CharKind::virtual_ && (p != o.p)) r.p = 0;
    return r;
}

ClassFunction ClassFunction::operator-(const ClassFunction& o) const {
    ClassFunction r = *this + o;
    r.coeffs = coeffs - o.coeffs;
    r.kind = CharKind::virtual_;
    return r;
}

ClassFunction ClassFunction::operator*(const BigInt& s) const {
    ClassFunction r = *this;
    r.coeffs = scaled(coeffs, s);
    if (s < 0 && r.kind != CharKind::projective) r.kind = CharKind::virtual_;
    return r;
}

std::string kind_name(CharKind k, long p) {
    switch (k) {
        case CharKind::ordinary: return "ordinary";
        case CharKind::brauer: return "brauer(" + std::to_string(p) + ")";
        case CharKind::projective: return "projective(" + std::to_string(p) + ")";
        case CharKind::virtual_: return "virtual";
    }
    return "?";
}

Rational inner_product(const ClassFunction& x, const ClassFunction& y) {
    same_table(x, y);
    return make_rational(x.table->weighted_pairing(x.coeffs, y.coeffs), x.table->group_order);
}

ClassFunction hat_restrict(const ClassFunction& x, long p) {
    if (x.kind == CharKind::brauer && x.p == p) return x;
    if (x.kind != CharKind::ordinary && x.kind != CharKind::virtual_)
        throw DomainError("hat restriction applies to ordinary or virtual characters, not " + kind_name(x.kind, x.p));
    const auto& t = *x.table;
    ClassFunction r = x;
    for (std::size_t fi = 0; fi < t.families.size(); ++fi)
        if (!t.classes[t.families[fi].rep_class].regular(p))
            for (std::size_t j = 0; j < t.families[fi].dim(); ++j) r.coeffs[t.offset(fi) + j] = 0;
    r.kind = CharKind::brauer;
    r.p = p;
    return r;
}

bool vanishes_off_regular(const ClassFunction& x, long p) {
    const auto& t = *x.table;
    for (std::size_t fi = 0; fi < t.families.size(); ++fi)
        if (!t.classes[t.families[fi].rep_class].regular(p))
            for (std::size_t j = 0; j < t.families[fi].dim(); ++j)
                if (x.coeffs[t.offset(fi) + j] != 0) return false;
    return true;
}

void FusionMap::validate() const {
    if (!sub || !super) throw DomainError("fusion map without tables");
    if (map.size() != sub->classes.size()) throw DomainError("fusion map does not cover the subgroup classes");
    if (super->group_order % sub->group_order != 0) throw DomainError("subgroup order does not divide the group order");
    for (std::size_t h = 0; h < map.size(); ++h) {
        if (map[h] >= super->classes.size()) throw DomainError("fusion target out of range");
        const auto &a = sub->classes[h], &b = super->classes[map[h]];
        if (a.element_order != b.element_order)
            throw DomainError("fusion of " + a.name + " into " + b.name + " changes the element order");
        if (b.centralizer % a.centralizer != 0)
            throw DomainError("centralizer of " + a.name + " does not divide that of " + b.name);
    }
    if (map[0] != 0) throw DomainError("identity must fuse into the identity");
}

FusionMap read_fusion(std::istream& in, const TablePtr& sub, const TablePtr& super) {
    FusionMap f{sub, super, std::vector<std::size_t>(sub->classes.size(), SIZE_MAX)};
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a)) continue;
        if (a == "fusion") continue;
        if (a == "end") break;
        if (!(ls >> b) || (ls >> extra)) throw FormatError("fusion line must read 'H-CLASS G-CLASS'");
        f.map[sub->class_index(a)] = super->class_index(b);
    }
    for (auto x : f.map)
        if (x == SIZE_MAX) throw FormatError("fusion map leaves a class unmapped");
    f.validate();
    return f;
}

ClassFunction transfer(const ClassFunction& x, const FusionMap& f, Direction dir) {
    f.validate();
    if (dir == Direction::restrict) {
        if (x.table != f.super) throw DomainError("restriction needs a class function of the group");
        std::vector<Cyc> vals;
        for (std::size_t h = 0; h < f.map.size(); ++h) vals.push_back(x.value(f.map[h]));
        return from_values(f.sub, vals, x.kind, x.p);
    }
    if (x.table != f.sub) throw DomainError("induction needs a class function of the subgroup");
    const auto &g = *f.super, &h = *f.sub;
    BigInt l = 1;
    for (const auto& c : h.classes) l = lcm(l, c.centralizer);
    std::vector<Cyc> vals(g.classes.size(), Cyc::integer(1, 0));
    for (std::size_t i = 0; i < f.map.size(); ++i) {
        const std::size_t c = f.map[i];
        vals[c] += x.value(i) * (g.classes[c].centralizer * l / h.classes[i].centralizer);
    }
    for (auto& v : vals) v = v.div_exact(l);
    return from_values(f.super, vals, x.kind, x.p);
}

ClassFunction tensor(const ClassFunction& x, const ClassFunction& y) {
    same_table(x, y);
    ClassFunction r = x;
    r.coeffs = x.table->product(x.coeffs, y.coeffs);
    auto plain = [](const ClassFunction& c) { return c.kind == CharKind::ordinary || c.kind == CharKind::brauer; };
    if ((projective(x) && (plain(y) || projective(y))) || (projective(y) && plain(x))) {
        r.kind = CharKind::projective;
        r.p = projective(x) ? x.p : y.p;
    } else if (x.kind == CharKind::brauer || y.kind == CharKind::brauer) {
        r.kind = (x.kind == CharKind::virtual_ || y.kind == CharKind::virtual_) ? CharKind::virtual_ : CharKind::brauer;
        r.p = x.kind == CharKind::brauer ? x.p : y.p;
    } else {
        r.kind = combine_kind(x, y);
        r.p = 0;
    }
    return r;
}

const SymmetrizationData& symmetrization_data(int r, long p) {
    std::lock_guard<std::mutex> lock(sym_mu);
    ensure_builtin();
    auto& s = sym_store();
    auto it = s.find({r, p});
    if (it == s.end())
        throw DomainError("no symmetrization data for r = " + std::to_string(r) + ", p = " + std::to_string(p));
    return it->second;
}

void register_symmetrization_data(SymmetrizationData d) {
    const std::size_t n = d.partitions.size();
    if (d.r < 1 || n == 0 || d.centralizers.size() != n || d.irr.rows != n || d.irr.cols != n)
        throw DomainError("symmetrization data has inconsistent sizes");
    for (const auto& part : d.partitions)
        if (std::accumulate(part.begin(), part.end(), 0) != d.r) throw DomainError("partition does not sum to r");
    if (d.sigma && (d.sigma->rows != n || d.sigma->cols != n)) throw DomainError("Sigma has wrong size");
    if (d.m) {
        if (d.m->rows != n || d.m->cols != n) throw DomainError("M has wrong size");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                if ((*d.m)(i, j) != (i == j ? 1 : 0)) throw DomainError("M is not lower unitriangular");
        if (d.sigma && (*d.m) * (*d.sigma) != d.irr) throw DomainError("Sigma is not M^-1 times the S_r table");
    }
    std::lock_guard<std::mutex> lock(sym_mu);
    ensure_builtin();
    sym_store()[{d.r, d.p}] = std::move(d);
}

// r R / p P / partitions a,b,c ... / centralizers ... / irr ROW;ROW / m ... / sigma ...
SymmetrizationData read_symmetrization_data(std::istream& in) {
    SymmetrizationData d;
    auto parse_matrix = [](std::istringstream& ls) {
        std::vector<Vec> rows;
        std::string rest, tok;
        std::getline(ls, rest);
        std::istringstream rs(rest);
        while (std::getline(rs, tok, ';')) {
            std::istringstream es(tok);
            Vec r;
            for (std::string x; es >> x;) r.push_back(parse_bigint(x));
            rows.push_back(r);
        }
        return IntMatrix::from_rows(rows);
    };
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw) || kw[0] == '#') continue;
        if (kw == "r") ls >> d.r;
        else if (kw == "p") ls >> d.p;
        else if (kw == "partitions") {
            for (std::string s; ls >> s;) {
                std::vector<int> part;
                std::istringstream ps(s);
                for (std::string x; std::getline(ps, x, ',');) part.push_back(std::stoi(x));
                d.partitions.push_back(part);
            }
        } else if (kw == "centralizers") {
            for (std::string s; ls >> s;) d.centralizers.push_back(parse_bigint(s));
        } else if (kw == "irr") d.irr = parse_matrix(ls);
        else if (kw == "m") d.m = parse_matrix(ls);
        else if (kw == "sigma") d.sigma = parse_matrix(ls);
        else throw FormatError("unknown symmetrization field '" + kw + "'");
    }
    return d;
}

ClassFunction symmetrize(const ClassFunction& x, const std::vector<int>& lambda, long p) {
    const int r = std::accumulate(lambda.begin(), lambda.end(), 0);
    if (r < 1) throw DomainError("empty partition");
    if (x.degree() < r) throw DomainError("symmetrization needs degree at least r");
    const bool modular = p > 0 && p <= r;
    if (p == 2 && r == 2) throw DomainError("symmetric and skew squares are not defined for p = 2");
    const auto& d = symmetrization_data(r, modular ? p : 0);
    if (modular && !d.sigma) throw DomainError("no extended p-modular table for this r and p");
    std::size_t li = 0;
    while (li < d.partitions.size() && d.partitions[li] != lambda) ++li;
    if (li == d.partitions.size()) throw DomainError("partition not in the symmetrization data");
    const IntMatrix& coef = modular ? *d.sigma : d.irr;

    const auto& t = *x.table;
    BigInt l = 1;
    for (const auto& c : d.centralizers) l = lcm(l, c);
    std::vector<Cyc> vals;
    std::vector<Cyc> base = t.usual_row(x.coeffs);
    for (std::size_t g = 0; g < t.classes.size(); ++g) {
        if (p > 0 && !t.classes[g].regular(p)) {
            vals.push_back(Cyc::integer(1, 0));
            continue;
        }
        Cyc s = Cyc::integer(1, 0);
        for (std::size_t ri = 0; ri < d.partitions.size(); ++ri) {
            if (coef(li, ri) == 0) continue;
            Cyc prod = Cyc::integer(1, 1);
            for (int part : d.partitions[ri]) prod = prod * base[power_class(t, g, part)];
            s += prod * (coef(li, ri) * l / d.centralizers[ri]);
        }
        vals.push_back(s.div_exact(l));
    }
    CharKind k = p > 0 ? CharKind::brauer : x.kind;
    if (x.kind == CharKind::virtual_ || x.kind == CharKind::projective) k = CharKind::virtual_;
    return from_values(x.table, vals, k, p > 0 ? p : x.p);
}

ClassFunction square(const ClassFunction& x, int sign, long p) {
    if (p == 2) throw DomainError("symmetric and skew squares are not defined for p = 2");
    if (sign != 1 && sign != -1) throw DomainError("square sign must be +1 or -1");
    return symmetrize(x, sign > 0 ? std::vector<int>{2} : std::vector<int>{1, 1}, p);
}

std::optional<Vec> irr_coefficients(const ClassFunction& x, const std::vector<Vec>& rows) {
    auto out = dec_solve(x.coeffs, IntMatrix::from_rows(rows, x.coeffs.size()));
    if (auto* c = std::get_if<DecCoefficients>(&out)) return c->z;
    if (std::holds_alternative<DecNotInSpan>(out)) return std::nullopt;
    throw Inconclusive("q-adic expansion did not terminate");
}

ClassFunction block_project(const ClassFunction& x, const std::vector<std::size_t>& block, const std::vector<Vec>* basis_rows) {
    const auto& rows = basis_rows ? *basis_rows : x.table->rows;
    auto z = irr_coefficients(x, rows);
    if (!z) throw DomainError("class function is not an integral combination of the basis");
    ClassFunction r = x;
    r.coeffs.assign(x.coeffs.size(), 0);
    for (std::size_t i : block) {
        if (i >= rows.size()) throw DomainError("block index out of range");
        r.coeffs = r.coeffs + scaled(rows[i], (*z)[i]);
    }
    return r;
}

bool is_virtual_projective(const ClassFunction& x, long p) {
    if (x.table->prime != 0) throw DomainError("projectivity is tested on ordinary class functions");
    return vanishes_off_regular(x, p);
}

}  // namespace moc
