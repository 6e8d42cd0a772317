#include "moc/chartable.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace moc {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

long to_long(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size()) throw FormatError("");
        return v;
    } catch (...) {
        throw FormatError("bad " + what + ": '" + s + "'");
    }
}

BigInt mod_p(const Rational& x, long p) {
    BigInt num = x.get_num(), den = x.get_den(), inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), BigInt(p).get_mpz_t()) == 0)
        throw DomainError("central character coefficient is not p-integral");
    return euclid_divmod(num * inv, p).r;
}

long inverse_mod(long a, long n) {
    for (long x = 1; x < n; ++x)
        if (mod_l(a * x, n) == 1) return x;
    return n == 1 ? 0 : throw DomainError("no inverse modulo " + std::to_string(n));
}

void build_family(ColumnFamily& fam) {
    const auto& b = *fam.basis;
    const long f = b.field().f;
    const auto h = b.field().elements();
    std::vector<long> cosets;
    for (long& k : fam.galois) {
        k = mod_l(k, f);
        if (f == 1) k = 0;
        if (gcd_l(k, f) != 1) throw DomainError("Galois exponent not coprime to the conductor " + std::to_string(f));
        long least = f;
        for (long x : h) least = std::min(least, mod_l(x * k, f == 1 ? 1 : f));
        if (std::find(cosets.begin(), cosets.end(), least) != cosets.end())
            throw DomainError("two members of a family have the same Galois image");
        cosets.push_back(least);
    }
    if (fam.galois.size() != b.dim()) throw DomainError("family size differs from the degree of its field");
    const std::size_t d = b.dim();
    fam.values.assign(d, {});
    for (std::size_t m = 0; m < d; ++m)
        for (std::size_t j = 0; j < d; ++j)
            fam.values[m].push_back(f == 1 ? b.element(j) : b.element(j).galois(fam.galois[m]));
    fam.gram = IntMatrix(d, d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t l = 0; l < d; ++l) {
            Cyc s = Cyc::integer(f, 0);
            for (std::size_t m = 0; m < d; ++m) s += fam.values[m][j] * fam.values[m][l].conj();
            if (!s.as_integer(fam.gram(j, l))) throw std::logic_error("trace form entry is not rational");
        }
    fam.conj = f == 1 ? IntMatrix::identity(d) : b.galois_matrix(-1);
    fam.table = default_registry().get(b.field(), b.reps()).table;
}

}  // namespace

int nu_p(BigInt n, long p) {
    if (n == 0) throw DomainError("valuation of zero");
    int v = 0;
    n = abs(n);
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

std::size_t MocTable::class_index(const std::string& nm) const {
    for (std::size_t i = 0; i < classes.size(); ++i)
        if (classes[i].name == nm) return i;
    throw FormatError("unknown class '" + nm + "'");
}

void MocTable::finalize() {
    const std::size_t nc = classes.size();
    if (nc == 0) throw FormatError("table without classes");
    if (group_order <= 0) throw FormatError("group order must be positive");
    for (const auto& c : classes) {
        if (c.element_order < 1) throw FormatError("element order of " + c.name + " must be positive");
        if (c.centralizer <= 0 || group_order % c.centralizer != 0)
            throw DomainError("centralizer order of " + c.name + " does not divide the group order");
        if (prime > 0 && !c.regular(prime)) throw DomainError("class " + c.name + " of a Brauer table is p-singular");
        for (auto [p, i] : c.power)
            if (i >= nc) throw FormatError("power map of " + c.name + " out of range");
    }

    // Sort the classes.
    std::vector<std::size_t> perm(nc);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        const auto &x = classes[a], &y = classes[b];
        if (x.element_order != y.element_order) return x.element_order < y.element_order;
        return x.centralizer > y.centralizer;
    });
    std::vector<std::size_t> inv(nc);
    for (std::size_t i = 0; i < nc; ++i) inv[perm[i]] = i;
    std::vector<ClassInfo> sorted;
    for (std::size_t i = 0; i < nc; ++i) {
        ClassInfo c = classes[perm[i]];
        for (auto& [p, j] : c.power) j = inv[j];
        sorted.push_back(std::move(c));
    }
    classes = std::move(sorted);
    if (classes[0].element_order != 1 || classes[0].centralizer != group_order)
        throw DomainError("the identity class is missing");
    for (auto& fam : families) {
        fam.rep_class = inv[fam.rep_class];
        for (auto& m : fam.members) m = inv[m];
        if (fam.members.empty() || fam.members[0] != fam.rep_class) throw FormatError("family must list its representative first");
    }

    // Sort the families by representative and permute the row columns.
    std::vector<std::size_t> old_offsets;
    std::size_t w = 0;
    for (const auto& fam : families) {
        if (!fam.basis) throw FormatError("family without basis");
        old_offsets.push_back(w);
        w += fam.dim();
    }
    std::vector<std::size_t> fperm(families.size());
    std::iota(fperm.begin(), fperm.end(), 0);
    std::sort(fperm.begin(), fperm.end(), [&](std::size_t a, std::size_t b) { return families[a].rep_class < families[b].rep_class; });
    for (auto& r : rows)
        if (r.size() != w) throw FormatError("row length " + std::to_string(r.size()) + " differs from table width " + std::to_string(w));
    std::vector<ColumnFamily> fams;
    std::vector<Vec> new_rows(rows.size());
    for (std::size_t fi : fperm) {
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t j = 0; j < families[fi].dim(); ++j) new_rows[r].push_back(rows[r][old_offsets[fi] + j]);
        fams.push_back(std::move(families[fi]));
    }
    families = std::move(fams);
    rows = std::move(new_rows);

    if (rows.size() != w) throw DomainError("table is not square: " + std::to_string(rows.size()) + " rows, " + std::to_string(w) + " columns");
    width_ = w;
    offsets_.clear();
    class_family_.assign(nc, {SIZE_MAX, 0});
    std::size_t off = 0;
    for (std::size_t fi = 0; fi < families.size(); ++fi) {
        auto& fam = families[fi];
        offsets_.push_back(off);
        off += fam.dim();
        if (fam.galois.size() != fam.members.size()) throw FormatError("family Galois list has wrong length");
        build_family(fam);
        for (std::size_t m = 0; m < fam.members.size(); ++m) {
            std::size_t c = fam.members[m];
            if (class_family_[c].first != SIZE_MAX) throw FormatError("class " + classes[c].name + " lies in two families");
            class_family_[c] = {fi, m};
            const auto &x = classes[c], &r = classes[fam.rep_class];
            if (x.element_order != r.element_order || x.centralizer != r.centralizer)
                throw DomainError("class " + x.name + " differs from its family representative " + r.name);
        }
    }
    for (std::size_t c = 0; c < nc; ++c)
        if (class_family_[c].first == SIZE_MAX) throw FormatError("class " + classes[c].name + " belongs to no family");
    if (families[0].dim() != 1) throw DomainError("identity family must be rational");
    if (labels.size() < rows.size()) labels.resize(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (labels[r].empty()) labels[r] = "X." + std::to_string(r + 1);
        if (degree(rows[r]) <= 0) throw DomainError("row " + labels[r] + " has nonpositive degree");
    }
}

BigInt MocTable::degree(const Vec& row) const {
    BigInt v;
    if (!value(row, 0).as_integer(v)) throw std::logic_error("degree is not rational");
    return v;
}

Cyc MocTable::value(const Vec& row, std::size_t cls) const {
    if (row.size() != width_) throw DomainError("class function has wrong width");
    auto [fi, m] = class_family_.at(cls);
    const auto& fam = families[fi];
    Cyc s = Cyc::integer(fam.basis->field().f, 0);
    for (std::size_t j = 0; j < fam.dim(); ++j)
        if (row[offsets_[fi] + j] != 0) s += fam.values[m][j] * row[offsets_[fi] + j];
    return s;
}

std::vector<Cyc> MocTable::usual_row(const Vec& row) const {
    std::vector<Cyc> out;
    for (std::size_t c = 0; c < classes.size(); ++c) out.push_back(value(row, c));
    return out;
}

Vec MocTable::product(const Vec& x, const Vec& y) const {
    if (x.size() != width_ || y.size() != width_) throw DomainError("class function has wrong width");
    Vec r(width_);
    for (std::size_t fi = 0; fi < families.size(); ++fi) {
        const auto& fam = families[fi];
        const std::size_t o = offsets_[fi], d = fam.dim();
        FieldElement a{fam.basis, Vec(x.begin() + o, x.begin() + o + d)};
        FieldElement b{fam.basis, Vec(y.begin() + o, y.begin() + o + d)};
        auto c = elem_mul(a, b, *fam.table);
        std::copy(c.coeffs.begin(), c.coeffs.end(), r.begin() + o);
    }
    return r;
}

Vec MocTable::conjugate(const Vec& x) const {
    if (x.size() != width_) throw DomainError("class function has wrong width");
    Vec r(width_);
    for (std::size_t fi = 0; fi < families.size(); ++fi) {
        const std::size_t o = offsets_[fi], d = families[fi].dim();
        Vec c = row_times(Vec(x.begin() + o, x.begin() + o + d), families[fi].conj);
        std::copy(c.begin(), c.end(), r.begin() + o);
    }
    return r;
}

BigInt MocTable::weighted_pairing(const Vec& x, const Vec& y) const {
    if (x.size() != width_ || y.size() != width_) throw DomainError("class function has wrong width");
    BigInt total = 0;
    for (std::size_t fi = 0; fi < families.size(); ++fi) {
        const auto& fam = families[fi];
        const std::size_t o = offsets_[fi], d = fam.dim();
        BigInt s = 0;
        for (std::size_t j = 0; j < d; ++j) {
            if (x[o + j] == 0) continue;
            for (std::size_t l = 0; l < d; ++l) s += x[o + j] * y[o + l] * fam.gram(j, l);
        }
        total += s * (group_order / classes[fam.rep_class].centralizer);
    }
    return total;
}

std::vector<std::vector<Cyc>> to_usual(const MocTable& t) {
    std::vector<std::vector<Cyc>> out;
    for (const auto& r : t.rows) out.push_back(t.usual_row(r));
    return out;
}

std::vector<Vec> from_usual(const MocTable& shape, const std::vector<std::vector<Cyc>>& usual) {
    std::vector<Vec> out;
    for (std::size_t r = 0; r < usual.size(); ++r) {
        const auto& vals = usual[r];
        if (vals.size() != shape.classes.size()) throw FormatError("usual row has wrong number of classes");
        Vec row(shape.width());
        for (std::size_t fi = 0; fi < shape.families.size(); ++fi) {
            const auto& fam = shape.families[fi];
            const auto& b = *fam.basis;
            const Cyc& v = vals[fam.rep_class];
            const long n = lcm_l(v.level(), b.field().f);
            IntMatrix tm(b.dim(), static_cast<std::size_t>(n));
            for (std::size_t j = 0; j < b.dim(); ++j) tm.set_row(j, b.element(j).at_level(n).coords());
            auto sol = rational_solve_rows(tm, v.at_level(n).coords());
            if (!sol.consistent) throw DomainError("value of row " + std::to_string(r + 1) + " at " + shape.classes[fam.rep_class].name + " lies outside the column field");
            for (std::size_t j = 0; j < b.dim(); ++j) {
                if (!is_integral(sol.z[j])) throw DomainError("value of row " + std::to_string(r + 1) + " at " + shape.classes[fam.rep_class].name + " is not integral over the basis");
                row[shape.offset(fi) + j] = sol.z[j].get_num();
            }
        }
        for (std::size_t c = 0; c < vals.size(); ++c)
            if (shape.value(row, c) != vals[c])
                throw DomainError("row " + std::to_string(r + 1) + " is not Galois compatible at class " + shape.classes[c].name);
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<QVec> central_character(const MocTable& t, const Vec& row, bool require_integral) {
    const BigInt deg = t.degree(row);
    std::vector<QVec> out;
    for (std::size_t fi = 0; fi < t.families.size(); ++fi) {
        const auto& fam = t.families[fi];
        Rational factor = make_rational(t.group_order, t.classes[fam.rep_class].centralizer * deg);
        QVec c;
        for (std::size_t j = 0; j < fam.dim(); ++j) {
            Rational x = factor * Rational(row[t.offset(fi) + j]);
            if (require_integral && !is_integral(x))
                throw DomainError("central character is not integral at class " + t.classes[fam.rep_class].name);
            c.push_back(x);
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<std::vector<std::size_t>> block_distribution(const MocTable& t, long p) {
    if (t.prime != 0) throw DomainError("blocks are read off an ordinary table");
    if (p < 2 || next_prime(p - 1) != p) throw DomainError("block distribution needs a prime");
    std::map<std::vector<BigInt>, std::size_t> part_of;
    std::vector<std::vector<std::size_t>> parts;
    const bool divides = t.group_order % p == 0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        std::vector<BigInt> key;
        if (divides) {
            auto om = central_character(t, t.rows[r]);
            for (std::size_t fi = 0; fi < t.families.size(); ++fi)
                if (t.classes[t.families[fi].rep_class].regular(p))
                    for (const auto& x : om[fi]) key.push_back(mod_p(x, p));
        } else {
            key.push_back(static_cast<long>(r));
        }
        auto [it, fresh] = part_of.emplace(key, parts.size());
        if (fresh) parts.emplace_back();
        parts[it->second].push_back(r);
    }
    return parts;
}

DefectInfo defect_zero(const MocTable& t, long p, std::size_t row) {
    auto deg_of = [&](std::size_t r) {
        BigInt d = t.degree(t.rows.at(r));
        if (t.group_order % d != 0) throw DomainError("degree of " + t.labels[r] + " does not divide the group order");
        return d;
    };
    DefectInfo info;
    info.defect_zero = (t.group_order / deg_of(row)) % p != 0;
    int top = nu_p(t.group_order, p), lo = top;
    for (const auto& part : block_distribution(t, p))
        if (std::find(part.begin(), part.end(), row) != part.end())
            for (std::size_t r : part) lo = std::min(lo, nu_p(deg_of(r), p));
    info.block_defect = top - lo;
    return info;
}

std::size_t power_class(const MocTable& t, std::size_t cls, long k) {
    const long ord = t.classes.at(cls).element_order;
    k = mod_l(k, ord);
    if (k == 0) return 0;
    if (gcd_l(k, ord) == 1) {
        const auto& fam = t.families[t.family_of(cls)];
        const long f = fam.basis->field().f;
        if (f == 1) return cls;
        std::size_t m0 = 0;
        while (fam.members[m0] != cls) ++m0;
        const long target = mod_l(fam.galois[m0] * k, f);
        for (std::size_t m = 0; m < fam.members.size(); ++m)
            if (fam.basis->field().contains(mod_l(target * inverse_mod(fam.galois[m], f), f))) return fam.members[m];
        throw std::logic_error("Galois image not found in family");
    }
    for (auto [p, e] : factorize(k)) {
        for (int i = 0; i < e; ++i) {
            if (t.classes[cls].element_order % p != 0) {
                cls = power_class(t, cls, p);
                continue;
            }
            auto it = t.classes[cls].power.find(p);
            if (it == t.classes[cls].power.end())
                throw DomainError("no " + std::to_string(p) + "-th power map stored for class " + t.classes[cls].name);
            cls = it->second;
        }
    }
    return cls;
}

MocTable read_table(std::istream& in) {
    MocTable t;
    bool legacy = false, ended = false;
    struct RawFamily {
        std::string rep;
        long f = 1;
        std::vector<long> gens, reps;
        bool has_reps = false;
        std::vector<std::pair<std::string, long>> members;
    };
    std::vector<RawFamily> raw;
    std::vector<std::vector<std::string>> power_names;
    std::string line;
    std::size_t lineno = 0;
    while (!ended && std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string s; ls >> s;) tok.push_back(s);
        if (tok.empty()) continue;
        const std::string& kw = tok[0];
        auto need = [&](std::size_t n) {
            if (tok.size() < n) throw FormatError("line " + std::to_string(lineno) + ": too few fields for '" + kw + "'");
        };
        if (kw == "table") {
            need(2);
            t.name = tok[1];
        } else if (kw == "order") {
            need(2);
            t.group_order = parse_bigint(tok[1]);
        } else if (kw == "prime") {
            need(2);
            t.prime = to_long(tok[1], "prime");
        } else if (kw == "encoding") {
            need(2);
            if (tok[1] == "legacy") legacy = true;
            else if (tok[1] == "decimal") legacy = false;
            else throw FormatError("unknown encoding " + tok[1]);
        } else if (kw == "class") {
            need(4);
            ClassInfo c;
            c.name = tok[1];
            c.element_order = to_long(tok[2], "element order");
            c.centralizer = parse_bigint(tok[3]);
            t.classes.push_back(c);
            power_names.emplace_back(tok.begin() + 4, tok.end());
        } else if (kw == "family") {
            need(2);
            RawFamily rf;
            rf.rep = tok[1];
            for (std::size_t i = 2; i < tok.size();) {
                const std::string& key = tok[i++];
                auto more = [&] { return i < tok.size() && tok[i] != "f" && tok[i] != "gens" && tok[i] != "reps" && tok[i] != "members"; };
                if (key == "f") {
                    need(i + 1);
                    rf.f = to_long(tok[i++], "conductor");
                } else if (key == "gens") {
                    need(i + 1);
                    if (tok[i] != "-")
                        for (auto& g : split(tok[i], ',')) rf.gens.push_back(to_long(g, "generator"));
                    ++i;
                } else if (key == "reps") {
                    rf.has_reps = true;
                    while (more()) rf.reps.push_back(to_long(tok[i++], "representative"));
                } else if (key == "members") {
                    while (more()) {
                        auto parts = split(tok[i++], ':');
                        if (parts.size() != 2) throw FormatError("member must read CLASS:k");
                        rf.members.emplace_back(parts[0], to_long(parts[1], "Galois exponent"));
                    }
                } else {
                    throw FormatError("line " + std::to_string(lineno) + ": unknown family field '" + key + "'");
                }
            }
            raw.push_back(std::move(rf));
        } else if (kw == "row") {
            need(2);
            t.labels.push_back(tok[1]);
            Vec r;
            if (legacy) {
                std::vector<std::int32_t> words;
                for (std::size_t i = 2; i < tok.size(); ++i) words.push_back(static_cast<std::int32_t>(to_long(tok[i], "legacy word")));
                std::size_t pos = 0;
                while (pos < words.size()) r.push_back(legacy_decode(legacy_take(words, pos)));
            } else {
                for (std::size_t i = 2; i < tok.size(); ++i) r.push_back(parse_bigint(tok[i]));
            }
            t.rows.push_back(std::move(r));
        } else if (kw == "end") {
            ended = true;
        } else {
            throw FormatError("line " + std::to_string(lineno) + ": unknown keyword '" + kw + "'");
        }
    }
    if (t.classes.empty()) throw FormatError("table has no classes");
    for (std::size_t c = 0; c < t.classes.size(); ++c)
        for (const auto& pm : power_names[c]) {
            auto parts = split(pm, ':');
            if (parts.size() != 2) throw FormatError("power map must read p:CLASS");
            t.classes[c].power[to_long(parts[0], "prime")] = t.class_index(parts[1]);
        }
    for (const auto& rf : raw) {
        ColumnFamily fam;
        fam.rep_class = t.class_index(rf.rep);
        if (rf.members.empty()) {
            fam.members = {fam.rep_class};
            fam.galois = {1};
        } else {
            for (const auto& [nm, k] : rf.members) {
                fam.members.push_back(t.class_index(nm));
                fam.galois.push_back(k);
            }
        }
        GaloisSubgroup g{rf.f, rf.gens};
        fam.basis = rf.has_reps ? default_registry().get(g, rf.reps).basis : default_registry().get(g).basis;
        t.families.push_back(std::move(fam));
    }
    t.finalize();
    return t;
}

void write_table(std::ostream& out, const MocTable& t) {
    out << "table " << t.name << "\norder " << t.group_order << "\nprime " << t.prime << "\n";
    for (const auto& c : t.classes) {
        out << "class " << c.name << ' ' << c.element_order << ' ' << c.centralizer;
        for (auto [p, i] : c.power) out << ' ' << p << ':' << t.classes[i].name;
        out << "\n";
    }
    for (const auto& fam : t.families) {
        out << "family " << t.classes[fam.rep_class].name;
        const auto& g = fam.basis->field();
        if (g.f != 1) {
            out << " f " << g.f << " gens ";
            if (g.generators.empty()) out << '-';
            for (std::size_t i = 0; i < g.generators.size(); ++i) out << (i ? "," : "") << g.generators[i];
            out << " reps";
            for (long r : fam.basis->reps()) out << ' ' << r;
            out << " members";
            for (std::size_t m = 0; m < fam.members.size(); ++m) out << ' ' << t.classes[fam.members[m]].name << ':' << fam.galois[m];
        }
        out << "\n";
    }
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out << "row " << t.labels[r];
        for (const auto& x : t.rows[r]) out << ' ' << x;
        out << "\n";
    }
    out << "end\n";
}

MocTable load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    return read_table(in);
}

}  // namespace moc
