#include "moc/improve.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <sstream>

#include "moc/error.hpp"

namespace moc {

namespace {

using Status = IlpOutcome::Status;

BigInt sum(const Vec& v) {
    BigInt s = 0;
    for (const auto& x : v) s += x;
    return s;
}

Vec unit(std::size_t n, std::size_t k) {
    Vec v(n, 0);
    v[k] = 1;
    return v;
}

// The part system over the support of n: bounds first, so that the
// zero objective makes the tableau dual feasible.
PartTest part_system(const Vec& n, const IntMatrix& relations) {
    if (relations.rows && relations.cols != n.size()) throw DomainError("relation rows have the wrong length");
    PartTest out;
    for (std::size_t k = 0; k < n.size(); ++k) {
        if (n[k] < 0) throw DomainError("part test needs a nonnegative vector");
        if (n[k] > 0) out.support.push_back(k);
    }
    const auto& sup = out.support;
    const std::size_t d = sup.size();
    std::vector<Vec> rows;
    Vec b;
    for (std::size_t k = 0; k < d; ++k) {
        rows.push_back(unit(d, k));
        b.push_back(n[sup[k]]);
    }
    rows.push_back(Vec(d, 1));
    b.push_back(sum(n) - 1);
    rows.push_back(Vec(d, -1));
    b.push_back(-1);
    for (std::size_t r = 0; r < relations.rows; ++r) {
        Vec v(d);
        BigInt full = 0;
        for (std::size_t k = 0; k < d; ++k) {
            v[k] = relations(r, sup[k]);
            full += v[k] * n[sup[k]];
        }
        rows.push_back(scaled(v, -1));
        b.push_back(0);
        rows.push_back(v);
        b.push_back(full);
    }
    out.system.a = IntMatrix::from_rows(rows, d);
    out.system.b = b;
    out.system.c = Vec(d, 0);
    return out;
}

Vec expand(const Vec& x, const std::vector<std::size_t>& sup, std::size_t n) {
    Vec out(n, 0);
    for (std::size_t k = 0; k < sup.size(); ++k) out[sup[k]] = x[k];
    return out;
}

IlpProblem with_rows(IlpProblem p, const std::vector<std::pair<Vec, BigInt>>& extra) {
    for (const auto& [row, rhs] : extra) {
        p.a.append_row(row);
        p.b.push_back(rhs);
    }
    return p;
}

// Lexicographically smallest feasible point, one coordinate at a time.
std::optional<Vec> lex_min(const IlpProblem& base, const GomoryOptions& opt) {
    const std::size_t d = base.a.cols;
    Vec x(d, 0);
    std::vector<std::pair<Vec, BigInt>> fixed;
    if (d == 0) return std::nullopt;
    for (std::size_t k = 0; k < d; ++k) {
        IlpProblem p = with_rows(base, fixed);
        p.c = unit(d, k);
        auto r = gomory_solve(p, opt);
        if (r.status == Status::infeasible) return std::nullopt;
        if (r.status == Status::aborted) throw Inconclusive("solver gave up on a lexicographic minimum");
        x[k] = r.x[k];
        fixed.emplace_back(unit(d, k), x[k]);
        fixed.emplace_back(scaled(unit(d, k), -1), -x[k]);
    }
    return x;
}

bool lower_unitriangular(const IntMatrix& u) {
    if (u.rows != u.cols) return false;
    for (std::size_t i = 0; i < u.rows; ++i)
        for (std::size_t j = i; j < u.cols; ++j)
            if (u(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

// All rows of B and BS paired with the PS columns.
IntMatrix brauer_products(const ImproveContext& ctx) {
    IntMatrix all = ctx.state.u;
    IntMatrix bu = ctx.b_pairings();
    for (std::size_t r = 0; r < bu.rows; ++r) all.append_row(bu.row(r));
    return all;
}

// Largest n with <phi, x - n y> >= 0 for every row; y needs a positive entry.
BigInt fit(const IntMatrix& prod, const Vec& x, const Vec& y) {
    std::optional<BigInt> best;
    for (std::size_t r = 0; r < prod.rows; ++r) {
        BigInt py = 0, px = 0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            px += prod(r, j) * x[j];
            py += prod(r, j) * y[j];
        }
        if (py <= 0) {
            if (px < 0) throw DomainError("a Brauer character has a negative product with a projective");
            continue;
        }
        BigInt q = floor_q(Rational(px, py));
        if (!best || q < *best) best = q;
    }
    if (!best) throw DomainError("no Brauer character meets the projective");
    return std::max<BigInt>(*best, BigInt(0));
}

BigInt box_size(const Vec& upper) {
    BigInt n = 1;
    for (const auto& u : upper) n *= u + 1;
    return n;
}

ProofEvent part_event(ProofEvent::Kind kind, const std::string& who, const PartTest& t, const Vec& n) {
    ProofEvent e;
    e.kind = kind;
    e.inputs = {who};
    e.conclusion = who + (kind == ProofEvent::Kind::irr_test ? " irreducible" : " indecomposable");
    e.ilps = {t.system};
    e.rows = {n};
    return e;
}

}  // namespace

std::string kind_name(ProofEvent::Kind k) {
    switch (k) {
        case ProofEvent::Kind::atom_pim: return "atom_pim";
        case ProofEvent::Kind::pim_test: return "pim_test";
        case ProofEvent::Kind::irr_test: return "irr_test";
        case ProofEvent::Kind::subsum_test: return "subsum_test";
        case ProofEvent::Kind::subtract: return "subtract";
        case ProofEvent::Kind::triangular: return "triangular";
        case ProofEvent::Kind::split: return "split";
        case ProofEvent::Kind::prune: return "prune";
        case ProofEvent::Kind::parity: return "parity";
    }
    return "?";
}

std::string ImproveContext::ps_name(std::size_t j) const {
    return j < ps_names.size() ? ps_names[j] : "PS[" + std::to_string(j + 1) + "]";
}

std::string ImproveContext::bs_name(std::size_t i) const {
    return i < bs_names.size() ? bs_names[i] : "BS[" + std::to_string(i + 1) + "]";
}

void ImproveContext::validate() const {
    const auto& u = state.u;
    if (u.rows != u.cols) throw DomainError("U is not square");
    if (b.rows && b.cols != u.rows) throw DomainError("B rows have the wrong length");
    if (p.rows && p.cols != u.rows) throw DomainError("P rows have the wrong length");
    if (!state.bs0.empty()) state.validate();
    if (det(u) * det(u) != 1) throw DomainError("U is not unimodular");
}

PartTest part_test(const Vec& n, const IntMatrix& relations, const GomoryOptions& opt) {
    PartTest out = part_system(n, relations);
    if (sum(n) <= 1) {
        out.verdict = Verdict::proved;
        return out;
    }
    auto r = gomory_solve(out.system, opt);
    if (r.status == Status::infeasible) out.verdict = Verdict::proved;
    if (r.status == Status::optimum) out.part = expand(r.x, out.support, n.size());
    return out;
}

PartTest pim_test(ImproveContext& ctx, std::size_t j) {
    if (j >= ctx.s()) throw DomainError("projective index out of range");
    Vec n = ctx.state.u.col(j);
    PartTest t = part_test(n, ctx.b, ctx.gomory);
    if (t.verdict == Verdict::proved) {
        auto kind = sum(n) == 1 ? ProofEvent::Kind::atom_pim : ProofEvent::Kind::pim_test;
        ctx.log.push_back(part_event(kind, ctx.ps_name(j), t, n));
        ctx.state.known_pims.insert(j);
    }
    return t;
}

PartTest irr_test(ImproveContext& ctx, std::size_t i) {
    if (i >= ctx.s()) throw DomainError("Brauer character index out of range");
    Vec n = ctx.state.u.row(i);
    PartTest t = part_test(n, ctx.p, ctx.gomory);
    if (t.verdict == Verdict::proved) {
        ctx.log.push_back(part_event(ProofEvent::Kind::irr_test, ctx.bs_name(i), t, n));
        ctx.state.known_irreducibles.insert(i);
    }
    return t;
}

std::vector<std::size_t> pim_test_all(ImproveContext& ctx) {
    std::vector<std::size_t> todo;
    for (std::size_t j = 0; j < ctx.s(); ++j)
        if (!ctx.state.known_pims.count(j)) todo.push_back(j);
    std::vector<std::future<PartTest>> jobs;
    for (std::size_t j : todo)
        jobs.push_back(std::async(std::launch::async, [&ctx, j] {
            GomoryOptions opt = ctx.gomory;
            opt.trace = nullptr;
            return part_test(ctx.state.u.col(j), ctx.b, opt);
        }));
    std::vector<std::size_t> proved;
    for (std::size_t k = 0; k < todo.size(); ++k) {
        PartTest t = jobs[k].get();
        if (t.verdict != Verdict::proved) continue;
        std::size_t j = todo[k];
        Vec n = ctx.state.u.col(j);
        auto kind = sum(n) == 1 ? ProofEvent::Kind::atom_pim : ProofEvent::Kind::pim_test;
        ctx.log.push_back(part_event(kind, ctx.ps_name(j), t, n));
        ctx.state.known_pims.insert(j);
        proved.push_back(j);
    }
    return proved;
}

SubsumTest subsum_test(const MocTable& t, const Vec& a, long p, const GomoryOptions& opt,
                       std::vector<ProofEvent>* log) {
    if (a.size() != t.rows.size()) throw DomainError("coefficient vector does not match the table");
    std::vector<std::size_t> sing;  // columns of the p-singular families
    for (std::size_t f = 0; f < t.families.size(); ++f) {
        if (t.classes[t.families[f].rep_class].regular(p)) continue;
        for (std::size_t c = 0; c < t.families[f].dim(); ++c) sing.push_back(t.offset(f) + c);
    }
    std::vector<std::size_t> sup;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 0) throw DomainError("subsum test needs nonnegative coefficients");
        if (a[i] > 0) sup.push_back(i);
    }
    const std::size_t d = sup.size();
    // M x = 0 on the singular columns, x over the support.
    IntMatrix m(sing.size(), d);
    for (std::size_t r = 0; r < sing.size(); ++r)
        for (std::size_t k = 0; k < d; ++k) m(r, k) = t.rows[sup[k]][sing[r]];
    Vec box(d);
    for (std::size_t k = 0; k < d; ++k) box[k] = a[sup[k]];

    ProofEvent e;
    e.kind = ProofEvent::Kind::subsum_test;
    e.inputs = {"subsum of (" + [&] {
        std::string s;
        for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + to_string(a[i]);
        return s;
    }() + ")"};
    e.conclusion = "indecomposable";
    {
        Vec ones(d, 1), neg(d, -1);
        std::vector<Vec> rows;
        Vec b;
        for (std::size_t k = 0; k < d; ++k) {
            rows.push_back(unit(d, k));
            b.push_back(box[k]);
        }
        rows.push_back(ones);
        b.push_back(sum(a) - 1);
        rows.push_back(neg);
        b.push_back(-1);
        for (std::size_t r = 0; r < m.rows; ++r) {
            rows.push_back(m.row(r));
            b.push_back(0);
            rows.push_back(scaled(m.row(r), -1));
            b.push_back(0);
        }
        e.ilps = {IlpProblem{IntMatrix::from_rows(rows, d), b, Vec(d, 0)}};
        e.uppers = {box};
    }

    SubsumTest out;
    auto finish = [&](std::optional<Vec> hit) {
        if (hit) {
            out.subsum = expand(*hit, sup, a.size());
        } else {
            out.verdict = Verdict::proved;
            if (log) log->push_back(e);
        }
        return out;
    };
    if (sum(a) <= 1) return finish(std::nullopt);

    if (box_size(box) <= BigInt(1) << 20) {
        // Odometer over the box keeping M x up to date.
        Vec x(d, 0), mx(m.rows, 0);
        BigInt total = sum(a), s = 0;
        while (true) {
            std::size_t k = 0;
            while (k < d && x[k] == box[k]) {
                for (std::size_t r = 0; r < m.rows; ++r) mx[r] -= m(r, k) * x[k];
                s -= x[k];
                x[k] = 0;
                ++k;
            }
            if (k == d) break;
            ++x[k];
            ++s;
            for (std::size_t r = 0; r < m.rows; ++r) mx[r] += m(r, k);
            if (s != total && is_zero(mx)) return finish(x);
        }
        return finish(std::nullopt);
    }
    auto r = gomory_solve(e.ilps[0], opt);
    if (r.status == Status::aborted) return out;
    if (r.status == Status::optimum) return finish(r.x);
    return finish(std::nullopt);
}

MaxMult max_multiplicities(const ImproveContext& ctx) {
    const std::size_t s = ctx.s();
    const auto& J = ctx.state.known_pims;
    IntMatrix prod = brauer_products(ctx);
    MaxMult m(s, std::vector<std::optional<BigInt>>(s));
    for (std::size_t i = 0; i < s; ++i) {
        if (!J.count(i)) continue;
        for (std::size_t j = 0; j < s; ++j) {
            if (J.count(j))
                m[i][j] = BigInt(i == j ? 1 : 0);
            else
                m[i][j] = fit(prod, unit(s, j), unit(s, i));
        }
    }
    return m;
}

BitSystem bit_system(const ImproveContext& ctx, const MaxMult& m, std::size_t f, std::size_t r, const Vec& sigma) {
    const std::size_t s = ctx.s();
    const auto& J = ctx.state.known_pims;
    const Vec n = ctx.state.u.row(r);
    if (n[f] <= 0) throw DomainError("the Brauer character does not meet the projective");
    const bool indec = J.count(f) > 0;
    BitSystem out;
    for (std::size_t i = 0; i < s; ++i) {
        if (i == f || n[i] == 0) continue;
        BigInt bound = n[i];
        if (indec) {
            if (J.count(i)) continue;
            if (m[f][i]) bound = std::min<BigInt>(bound, *m[f][i]);
        } else if (J.count(i) && m[i][f]) {
            bound = std::min<BigInt>(bound, *m[i][f]);
        }
        if (bound == 0) continue;
        out.free.push_back(i);
        out.upper.push_back(bound);
    }
    const std::size_t d = out.free.size();
    std::vector<Vec> plus, minus;
    Vec bplus, bminus;
    for (std::size_t k = 0; k < ctx.p.rows; ++k) {
        Vec w = ctx.p.row(k), v(d);
        for (std::size_t t = 0; t < d; ++t) v[t] = w[out.free[t]];
        plus.push_back(v);
        bplus.push_back(dot(w, n) - w[f]);
        minus.push_back(scaled(v, -1));
        bminus.push_back(w[f]);
    }
    std::vector<Vec> rows;
    Vec b;
    for (std::size_t t = 0; t < d; ++t) {
        rows.push_back(unit(d, t));
        b.push_back(out.upper[t]);
    }
    rows.insert(rows.end(), plus.begin(), plus.end());
    b.insert(b.end(), bplus.begin(), bplus.end());
    rows.insert(rows.end(), minus.begin(), minus.end());
    b.insert(b.end(), bminus.begin(), bminus.end());
    out.system.a = IntMatrix::from_rows(rows, d);
    out.system.b = b;
    out.system.c = Vec(d);
    for (std::size_t t = 0; t < d; ++t) out.system.c[t] = sigma[out.free[t]];
    out.constant = sigma[f];
    return out;
}

Subtraction subtract_indecomposable(ImproveContext& ctx, std::size_t f, const Vec& sigma) {
    const std::size_t s = ctx.s();
    if (f >= s) throw DomainError("projective index out of range");
    if (sigma.size() != s) throw DomainError("projective has the wrong length");
    Subtraction out;
    Vec col = ctx.state.u.col(f);
    if (ctx.state.known_pims.count(f)) {
        out.max_rule = true;
    } else if (std::all_of(col.begin(), col.end(), [](const BigInt& x) { return x == 0 || x == 1; })) {
        out.max_rule = false;
    } else {
        throw DomainError(ctx.ps_name(f) + " is neither a known PIM nor multiplicity free");
    }
    MaxMult m = max_multiplicities(ctx);
    std::optional<BigInt> z;
    bool aborted = false;
    for (std::size_t r = 0; r < s; ++r) {
        if (col[r] <= 0) continue;
        BitSystem bs = bit_system(ctx, m, f, r, sigma);
        std::optional<BigInt> value;
        if (bs.free.empty()) {
            bool ok = true;
            for (const auto& x : bs.system.b) ok = ok && x >= 0;
            if (!ok) throw DomainError("no bit exists; the data are inconsistent");
            value = bs.constant;
        } else {
            auto res = solve_bounded(bs.system, bs.upper, ctx.gomory);
            if (res.status == Status::infeasible) throw DomainError("no bit exists; the data are inconsistent");
            if (res.status == Status::optimum) value = res.value + bs.constant;
        }
        out.phis.push_back(r);
        out.systems.push_back(bs.system);
        out.uppers.push_back(bs.upper);
        out.free.push_back(bs.free);
        out.constants.push_back(bs.constant);
        out.minima.push_back(value);
        if (!value) {
            aborted = true;
            continue;
        }
        if (!z)
            z = *value;
        else
            z = out.max_rule ? std::max<BigInt>(*z, *value) : std::min<BigInt>(*z, *value);
    }
    if (!z || (aborted && !out.max_rule)) z = 0;
    out.z = std::max<BigInt>(*z, BigInt(0));
    out.reduced = sigma;
    out.reduced[f] -= out.z;

    ProofEvent e;
    e.kind = ProofEvent::Kind::subtract;
    e.inputs = {ctx.ps_name(f)};
    e.conclusion = "Sigma - " + to_string(out.z) + " " + ctx.ps_name(f) + " projective";
    e.ilps = out.systems;
    e.uppers = out.uppers;
    Vec status;
    for (std::size_t k = 0; k < out.minima.size(); ++k) {
        e.values.push_back(out.minima[k] ? *out.minima[k] - out.constants[k] : BigInt(0));
        status.push_back(out.minima[k] ? 1 : 0);
    }
    e.values.push_back(out.z);
    e.rows = {out.constants, status, Vec{out.max_rule ? 1 : 0}, sigma, out.reduced};
    ctx.log.push_back(std::move(e));
    return out;
}

void replace_ps(ImproveContext& ctx, std::size_t k, const Vec& w) {
    const std::size_t s = ctx.s();
    if (k >= s || w.size() != s) throw DomainError("replacement has the wrong shape");
    if (w[k] != 1 && w[k] != -1) throw DomainError("replacement would not give a basic set");
    Vec col = times_col(ctx.state.u, w);
    for (std::size_t i = 0; i < s; ++i) ctx.state.u(i, k) = col[i];
    // v' = T^{-1} v with T the identity except column k = w.
    for (std::size_t r = 0; r < ctx.p.rows; ++r) {
        BigInt vk = ctx.p(r, k) * w[k];
        for (std::size_t j = 0; j < s; ++j)
            if (j != k) ctx.p(r, j) -= w[j] * vk;
        ctx.p(r, k) = vk;
    }
    ctx.state.known_pims.erase(k);
    ctx.state.known_irreducibles.clear();
}

bool lex_smaller(const Vec& x, const Vec& y) {
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

namespace {

// z of the (i, j0) step for one relation; 0 when it does not apply.
BigInt triangular_z(const Vec& v, const IntMatrix& u, std::size_t i, std::size_t j0) {
    if (v[j0] <= 0 || v[i] >= 0) return 0;
    BigInt rest = -v[i];
    for (std::size_t j = 0; j < i; ++j)
        if (j != j0 && v[j] > 0) rest -= v[j] * u(i, j);
    if (rest <= 0) return 0;
    return ceil_q(Rational(rest, v[j0]));
}

Vec triangular_update(const IntMatrix& u, std::size_t i, std::size_t j0, const BigInt& z) {
    Vec w = unit(u.rows, j0);
    w[i] -= z;
    for (std::size_t l = i + 1; l < u.rows; ++l) w[l] += z * u(l, i);
    return w;
}

}  // namespace

std::size_t triangular_reduce(ImproveContext& ctx) {
    if (!lower_unitriangular(ctx.state.u)) throw DomainError("U is not lower unitriangular");
    const std::size_t s = ctx.s();
    std::size_t count = 0;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < s; ++i) {
            for (std::size_t j0 = 0; j0 < i; ++j0) {
                BigInt z = 0;
                std::size_t best = 0;
                for (std::size_t r = 0; r < ctx.p.rows; ++r) {
                    BigInt zr = triangular_z(ctx.p.row(r), ctx.state.u, i, j0);
                    if (zr > z) {
                        z = zr;
                        best = r;
                    }
                }
                if (z == 0) continue;
                const IntMatrix& u = ctx.state.u;
                Vec w = triangular_update(u, i, j0, z);
                ProofEvent e;
                e.kind = ProofEvent::Kind::triangular;
                e.inputs = {ctx.ps_name(j0), ctx.ps_name(i), best < ctx.p_names.size() ? ctx.p_names[best] : "P[" + std::to_string(best + 1) + "]"};
                e.conclusion = ctx.ps_name(j0) + " contains the PIM of " + ctx.ps_name(i) + " " + to_string(z) + " times";
                e.values = {BigInt(static_cast<long>(i)), BigInt(static_cast<long>(j0)), z};
                e.rows = {ctx.p.row(best), u.row(i), u.col(i), u.col(j0), w};
                ctx.log.push_back(std::move(e));
                replace_ps(ctx, j0, w);
                ++count;
                changed = true;
            }
        }
    }
    return count;
}

Split split_decomposable(ImproveContext& ctx, std::size_t i) {
    const std::size_t s = ctx.s();
    if (i >= s) throw DomainError("projective index out of range");
    Split out;
    std::optional<std::size_t> rel;
    for (std::size_t r = 0; r < ctx.p.rows && !rel; ++r)
        if (ctx.p(r, i) < 0) rel = r;
    if (!rel) {
        out.diagnostics = "no projective has a negative coefficient at " + ctx.ps_name(i);
        return out;
    }
    Vec v = ctx.p.row(*rel);
    IntMatrix prod = brauer_products(ctx);
    for (std::size_t j = 0; j < s; ++j) {
        if (j == i || v[j] <= 0) continue;
        if (fit(prod, scaled(unit(s, j), v[j]), unit(s, i)) > 0) {
            out.diagnostics = ctx.ps_name(i) + " may lie in " + ctx.ps_name(j);
            return out;
        }
    }
    Vec n = ctx.state.u.col(i);
    PartTest sys = part_system(n, ctx.b);
    const std::size_t d = sys.support.size();
    auto first = lex_min(sys.system, ctx.gomory);
    if (!first) {
        out.diagnostics = ctx.ps_name(i) + " has no proper part";
        return out;
    }
    std::optional<Vec> second;
    for (std::size_t k = d; k-- > 0 && !second;) {
        if ((*first)[k] + 1 > n[sys.support[k]]) continue;
        std::vector<std::pair<Vec, BigInt>> extra;
        for (std::size_t t = 0; t < k; ++t) {
            extra.emplace_back(unit(d, t), (*first)[t]);
            extra.emplace_back(scaled(unit(d, t), -1), -(*first)[t]);
        }
        extra.emplace_back(scaled(unit(d, k), -1), -((*first)[k] + 1));
        second = lex_min(with_rows(sys.system, extra), ctx.gomory);
    }
    out.psi1 = expand(*first, sys.support, s);
    if (!second) {
        out.diagnostics = "only one part";
        return out;
    }
    out.psi2 = expand(*second, sys.support, s);
    if (out.psi1 + out.psi2 != n) {
        out.diagnostics = "the two smallest parts do not add up to " + ctx.ps_name(i);
        return out;
    }

    auto inv = unimodular_inverse(ctx.state.u);
    if (!inv) throw DomainError("U is not unimodular");
    auto in_ps = [&](const Vec& x) {
        for (std::size_t j = 0; j < s; ++j)
            if (ctx.state.u.col(j) == x) return true;
        return false;
    };
    // Planned replacements as (PS index, PA vector), applied in order.
    std::vector<std::pair<std::size_t, Vec>> plan;
    std::string how;
    if (in_ps(out.psi1)) {
        plan = {{i, out.psi2}};
        how = "case (i)";
    } else if (in_ps(out.psi2)) {
        plan = {{i, out.psi1}};
        how = "case (i)";
    } else if (lower_unitriangular(ctx.state.u)) {
        const Vec& a = out.psi1[i] == 1 ? out.psi1 : out.psi2;
        const Vec& other = out.psi1[i] == 1 ? out.psi2 : out.psi1;
        if (a[i] != 1 || other[i] != 0) {
            out.diagnostics = "parts do not separate the diagonal entry";
            return out;
        }
        std::size_t l = 0;
        while (l < s && other[l] == 0) ++l;
        if (l <= i || l == s) {
            out.diagnostics = "no column to receive the second part";
            return out;
        }
        plan = {{i, a}, {l, other}};
        how = "case (ii)";
    } else {
        out.diagnostics = "neither part is in PS and U is not triangular";
        return out;
    }
    // Dry run on a copy so that a failed plan leaves the state alone.
    ImproveContext trial;
    trial.state.u = ctx.state.u;
    trial.p = ctx.p;
    for (const auto& [k, x] : plan) {
        auto ti = unimodular_inverse(trial.state.u);
        Vec w = times_col(*ti, x);
        if (w[k] != 1 && w[k] != -1) {
            out.diagnostics = "replacement would not give a basic set";
            return out;
        }
        replace_ps(trial, k, w);
    }
    if (det(trial.state.u) * det(trial.state.u) != 1) {
        out.diagnostics = "replacement would not give a basic set";
        return out;
    }
    ProofEvent e;
    e.kind = ProofEvent::Kind::split;
    e.inputs = {ctx.ps_name(i)};
    e.conclusion = ctx.ps_name(i) + " decomposes, " + how;
    e.rows = {n, out.psi1, out.psi2, v};
    e.ilps = {sys.system};
    ctx.log.push_back(std::move(e));
    for (const auto& [k, x] : plan) {
        auto ti = unimodular_inverse(ctx.state.u);
        replace_ps(ctx, k, times_col(*ti, x));
    }
    out.split = true;
    out.diagnostics = how;
    return out;
}

Prune prune_essential(ImproveContext& ctx) {
    const std::size_t s = ctx.s();
    Prune out;
    std::vector<std::size_t> pool(ctx.p.rows);
    std::iota(pool.begin(), pool.end(), 0);
    auto p_name = [&](std::size_t k) { return k < ctx.p_names.size() ? ctx.p_names[k] : "P[" + std::to_string(k + 1) + "]"; };
    while (true) {
        // [A | E_s] with the admitted vectors as the first columns.
        const std::size_t r = out.essential.size();
        IntMatrix c(s, r + s);
        for (std::size_t t = 0; t < r; ++t)
            for (std::size_t j = 0; j < s; ++j) c(j, t) = ctx.p(out.essential[t], j);
        for (std::size_t j = 0; j < s; ++j) c(j, r + j) = 1;
        std::vector<std::size_t> rest;
        for (std::size_t k : pool) {
            if (std::find(out.essential.begin(), out.essential.end(), k) != out.essential.end()) continue;
            auto x = lp_feasible(c, ctx.p.row(k));
            if (!x) {
                rest.push_back(k);
                continue;
            }
            BigInt den = 1;
            for (const auto& q : *x) den = lcm(den, BigInt(q.get_den()));
            Vec num;
            for (const auto& q : *x) num.push_back(Rational(q * den).get_num());
            ProofEvent e;
            e.kind = ProofEvent::Kind::prune;
            e.inputs = {p_name(k)};
            for (std::size_t t : out.essential) e.inputs.push_back(p_name(t));
            e.conclusion = p_name(k) + " is not essential";
            e.rows = {ctx.p.row(k), num};
            for (std::size_t t = 0; t < r; ++t) e.rows.push_back(ctx.p.row(out.essential[t]));
            e.values = {den};
            ctx.log.push_back(std::move(e));
            out.discarded.push_back({k, *x});
        }
        pool = out.essential;
        pool.insert(pool.end(), rest.begin(), rest.end());
        if (rest.empty()) break;
        auto pick = std::min_element(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
            BigInt sa = sum(ctx.p.row(a)), sb = sum(ctx.p.row(b));
            return sa < sb || (sa == sb && a < b);
        });
        out.essential.push_back(*pick);
    }
    return out;
}

namespace {

struct ParityBounds {
    Vec lo, hi;
};

// Bounds on the column of the trivial PIM inside the carrier; mask[k] is
// chi_k(1) mod 2 for real chi_k and -1 otherwise.
ParityBounds parity_bounds(const Vec& carrier, const Vec& mask) {
    ParityBounds b{Vec(carrier.size(), 0), carrier};
    for (std::size_t k = 0; k < carrier.size(); ++k) {
        if (mask[k] < 0) continue;
        b.lo[k] = mask[k];
        if ((b.hi[k] - mask[k]) % 2 != 0) b.hi[k] -= 1;
    }
    return b;
}

}  // namespace

Parity fong_parity(const IntMatrix& proj, const std::vector<BigInt>& degrees, const std::vector<bool>& real,
                   std::size_t trivial, long p, std::vector<ProofEvent>* log) {
    Parity out;
    if (p != 2) return out;
    const std::size_t k = proj.rows;
    if (degrees.size() != k || real.size() != k || trivial >= k) throw DomainError("parity data have the wrong length");
    Vec mask(k, -1);
    for (std::size_t c = 0; c < k; ++c) {
        if (!real[c]) continue;
        int par = mpz_odd_p(degrees[c].get_mpz_t()) ? 1 : 0;
        mask[c] = par;
        out.parity.emplace_back(c, par);
    }
    for (std::size_t j = 0; j < proj.cols && !out.carrier; ++j)
        if (proj(trivial, j) == 1) out.carrier = j;
    if (!out.carrier) return out;
    Vec carrier = proj.col(*out.carrier);
    ParityBounds b = parity_bounds(carrier, mask);
    for (std::size_t c = 0; c < k; ++c)
        if (b.lo[c] > b.hi[c]) throw DomainError("parity bounds are contradictory");
    if (b.lo != b.hi) return out;
    out.trivial_pim = b.lo;
    Vec rest = carrier - b.lo;
    for (std::size_t j = 0; j < proj.cols; ++j)
        if (j != *out.carrier && proj.col(j) == rest) out.contained.push_back(j);
    if (log && !out.contained.empty()) {
        ProofEvent e;
        e.kind = ProofEvent::Kind::parity;
        e.inputs = {"P[" + std::to_string(*out.carrier + 1) + "]"};
        for (std::size_t j : out.contained) e.inputs.push_back("P[" + std::to_string(j + 1) + "]");
        e.conclusion = "contained in the carrier of the trivial PIM";
        e.rows = {carrier, *out.trivial_pim, mask};
        for (std::size_t j : out.contained) e.rows.push_back(proj.col(j));
        log->push_back(std::move(e));
    }
    return out;
}

bool replay(const ProofEvent& e) {
    using K = ProofEvent::Kind;
    switch (e.kind) {
        case K::atom_pim: {
            if (e.rows.empty()) return false;
            return sum(e.rows[0]) == 1 && nonneg(e.rows[0]);
        }
        case K::pim_test:
        case K::irr_test: {
            if (e.ilps.size() != 1 || e.rows.empty()) return false;
            // The system must be a part system of the stated vector.
            const auto& sys = e.ilps[0];
            const Vec& n = e.rows[0];
            std::vector<std::size_t> sup;
            for (std::size_t k = 0; k < n.size(); ++k)
                if (n[k] > 0) sup.push_back(k);
            if (sys.a.cols != sup.size() || sys.a.rows < sup.size() + 2) return false;
            for (std::size_t k = 0; k < sup.size(); ++k)
                if (sys.a.row(k) != unit(sup.size(), k) || sys.b[k] != n[sup[k]]) return false;
            if (sys.b[sup.size()] != sum(n) - 1 || sys.b[sup.size() + 1] != -1) return false;
            if (sum(n) <= 1) return true;
            return gomory_solve(sys).status == Status::infeasible;
        }
        case K::subsum_test: {
            if (e.ilps.size() != 1 || e.uppers.size() != 1) return false;
            if (box_size(e.uppers[0]) <= 1'000'000) return brute_force_ilp(e.ilps[0], e.uppers[0]).status == Status::infeasible;
            return gomory_solve(e.ilps[0]).status == Status::infeasible;
        }
        case K::subtract: {
            if (e.rows.size() < 5 || e.values.size() != e.ilps.size() + 1 || e.uppers.size() != e.ilps.size()) return false;
            const Vec& constants = e.rows[0];
            const Vec& status = e.rows[1];
            bool max_rule = e.rows[2][0] == 1;
            std::optional<BigInt> z;
            bool aborted = false;
            for (std::size_t k = 0; k < e.ilps.size(); ++k) {
                BigInt value;
                if (e.ilps[k].a.cols == 0) {
                    value = constants[k];
                } else {
                    auto r = solve_bounded(e.ilps[k], e.uppers[k]);
                    if ((r.status == Status::optimum) != (status[k] == 1)) return false;
                    if (r.status != Status::optimum) {
                        aborted = true;
                        continue;
                    }
                    if (r.value != e.values[k]) return false;
                    value = r.value + constants[k];
                }
                z = !z ? value : (max_rule ? std::max<BigInt>(*z, value) : std::min<BigInt>(*z, value));
            }
            if (!z || (aborted && !max_rule)) z = 0;
            BigInt zz = std::max<BigInt>(*z, BigInt(0));
            if (zz != e.values.back()) return false;
            Vec expect = e.rows[3];
            Vec diff = expect - e.rows[4];
            BigInt total = sum(diff);
            return total == zz && std::count_if(diff.begin(), diff.end(), [](const BigInt& x) { return x != 0; }) <= 1;
        }
        case K::triangular: {
            if (e.rows.size() != 5 || e.values.size() != 3) return false;
            const Vec &v = e.rows[0], &row_i = e.rows[1], &col_i = e.rows[2], &w = e.rows[4];
            std::size_t i = e.values[0].get_ui(), j0 = e.values[1].get_ui();
            const std::size_t s = v.size();
            IntMatrix u(s, s);
            for (std::size_t j = 0; j < s; ++j) {
                u(i, j) = row_i[j];
                u(j, i) = col_i[j];
            }
            BigInt z = triangular_z(v, u, i, j0);
            if (z <= 0 || z != e.values[2]) return false;
            if (w != triangular_update(u, i, j0, z)) return false;
            return col_i[i] == 1;
        }
        case K::split: {
            if (e.rows.size() != 4 || e.ilps.size() != 1) return false;
            const Vec &n = e.rows[0], &a = e.rows[1], &b = e.rows[2];
            if (a + b != n || is_zero(a) || is_zero(b) || !nonneg(a) || !nonneg(b)) return false;
            // Both parts satisfy the part system.
            std::vector<std::size_t> sup;
            for (std::size_t k = 0; k < n.size(); ++k)
                if (n[k] > 0) sup.push_back(k);
            for (const Vec* x : {&a, &b}) {
                Vec y(sup.size());
                for (std::size_t k = 0; k < sup.size(); ++k) y[k] = (*x)[sup[k]];
                Vec lhs = times_col(e.ilps[0].a, y);
                for (std::size_t r = 0; r < lhs.size(); ++r)
                    if (lhs[r] > e.ilps[0].b[r]) return false;
            }
            return true;
        }
        case K::prune: {
            if (e.rows.size() < 2 || e.values.size() != 1 || e.values[0] <= 0) return false;
            const Vec &target = e.rows[0], &num = e.rows[1];
            const std::size_t s = target.size(), r = e.rows.size() - 2;
            if (num.size() != r + s || !nonneg(num)) return false;
            Vec acc(s, 0);
            for (std::size_t t = 0; t < r; ++t) acc = acc + scaled(e.rows[2 + t], num[t]);
            for (std::size_t j = 0; j < s; ++j) acc[j] += num[r + j];
            return acc == scaled(target, e.values[0]);
        }
        case K::parity: {
            if (e.rows.size() < 4) return false;
            ParityBounds b = parity_bounds(e.rows[0], e.rows[2]);
            if (b.lo != b.hi || b.lo != e.rows[1]) return false;
            Vec rest = e.rows[0] - e.rows[1];
            for (std::size_t k = 3; k < e.rows.size(); ++k)
                if (e.rows[k] != rest) return false;
            return true;
        }
    }
    return false;
}

}  // namespace moc
