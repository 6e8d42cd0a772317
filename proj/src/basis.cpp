#include "moc/basis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "moc/error.hpp"

namespace moc {

namespace {

// The first candidate row in the span of the earlier ones gives an integer
// dependency over all candidate rows.
std::optional<Vec> find_dependency(const std::vector<Vec>& rows) {
    for (std::size_t k = 0; k < rows.size(); ++k) {
        Vec d(rows.size(), 0);
        if (k == 0) {
            if (!is_zero(rows[0])) continue;
            d[0] = 1;
            return d;
        }
        std::vector<Vec> prefix(rows.begin(), rows.begin() + static_cast<long>(k));
        auto sol = rational_solve_rows(IntMatrix::from_rows(prefix), rows[k]);
        if (!sol.consistent) continue;
        BigInt den = 1;
        for (const auto& z : sol.z) den = lcm(den, BigInt(z.get_den()));
        for (std::size_t i = 0; i < k; ++i) d[i] = Rational(sol.z[i] * den).get_num();
        d[k] = -den;
        return d;
    }
    return std::nullopt;
}

}  // namespace

BasicSetCheck certify_brauer_basic(const std::vector<Vec>& hat_rows, const std::vector<std::size_t>& candidate,
                                   const DecOptions& opt) {
    if (candidate.empty()) throw DomainError("empty candidate set");
    std::vector<bool> in(hat_rows.size(), false);
    std::vector<Vec> cand;
    for (std::size_t c : candidate) {
        if (c >= hat_rows.size()) throw DomainError("candidate index out of range");
        if (in[c]) throw DomainError("candidate index repeated");
        in[c] = true;
        cand.push_back(hat_rows[c]);
    }
    BasicSetCheck out;
    for (std::size_t i = 0; i < hat_rows.size(); ++i)
        if (!in[i]) out.others.push_back(i);
    if (auto d = find_dependency(cand)) {
        out.dependency = *d;
        return out;
    }
    IntMatrix t = IntMatrix::from_rows(cand);
    out.relations = IntMatrix(0, cand.size());
    for (std::size_t i : out.others) {
        auto r = dec_solve(hat_rows[i], t, opt);
        if (auto* c = std::get_if<DecCoefficients>(&r)) {
            out.relations.append_row(c->z);
            continue;
        }
        if (auto* u = std::get_if<DecUndecided>(&r); u && u->reason == DecUndecided::Reason::max_iterations)
            throw Inconclusive("row " + std::to_string(i) + ": q-adic expansion did not terminate");
        out.non_integral_row = i;
        return out;
    }
    out.basic = true;
    return out;
}

BasicSetCheck certify_brauer_basic(const std::vector<ClassFunction>& hat_chars, const std::vector<std::size_t>& candidate,
                                   const DecOptions& opt) {
    std::vector<Vec> rows;
    for (const auto& x : hat_chars) rows.push_back(x.coeffs);
    return certify_brauer_basic(rows, candidate, opt);
}

PairCheck certify_pair(const IntMatrix& u) {
    if (u.rows != u.cols || u.rows == 0) throw DomainError("U must be square and nonempty");
    PairCheck out;
    out.u = u;
    out.det = det(u);
    out.basic_pair = abs(out.det) == 1;
    return out;
}

PairCheck certify_pair(const std::vector<ClassFunction>& bs, const std::vector<ClassFunction>& ps) {
    if (bs.size() != ps.size()) throw DomainError("basic sets of different sizes");
    IntMatrix u(bs.size(), ps.size());
    for (std::size_t i = 0; i < bs.size(); ++i)
        for (std::size_t j = 0; j < ps.size(); ++j) {
            Rational x = inner_product(bs[i], ps[j]);
            if (!is_integral(x)) throw DomainError("non-integral inner product " + to_string(x));
            u(i, j) = x.get_num();
        }
    return certify_pair(u);
}

std::size_t ibr_count(const std::vector<Vec>& hat_rows) {
    if (hat_rows.empty()) return 0;
    return rank(IntMatrix::from_rows(hat_rows));
}

std::size_t ibr_count(const MocTable& t, const std::vector<std::size_t>& block, long p) {
    auto tp = std::make_shared<const MocTable>(t);
    std::vector<Vec> rows;
    for (std::size_t r : block) rows.push_back(hat_restrict(ClassFunction::row(tp, r), p).coeffs);
    return ibr_count(rows);
}

namespace {

bool unit_vector(const Vec& v) {
    int ones = 0;
    for (const auto& x : v) {
        if (x == 1)
            ++ones;
        else if (x != 0)
            return false;
    }
    return ones == 1;
}

}  // namespace

std::vector<std::size_t> detect_atom_pims(const IntMatrix& u) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < u.cols; ++j)
        if (unit_vector(u.col(j))) out.push_back(j);
    return out;
}

std::vector<std::size_t> detect_atom_irreducibles(const IntMatrix& u) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < u.rows; ++i)
        if (unit_vector(u.row(i))) out.push_back(i);
    return out;
}

void BasicSetState::validate() const {
    std::size_t m = bs0.size();
    if (u.rows != m || u.cols != m) throw DomainError("U does not match the basic set size");
    if (s.cols != m) throw DomainError("relation matrix has the wrong width");
    for (std::size_t i = 0; i < m; ++i) {
        if (bs0[i] >= s.rows) throw DomainError("basic set index outside the relation matrix");
        for (std::size_t j = 0; j < m; ++j)
            if (s(bs0[i], j) != (i == j ? 1 : 0)) throw DomainError("relations are not the identity on the basic set");
    }
}

namespace {

bool brauer_side(Coords c) { return c == Coords::bs0 || c == Coords::ba; }
bool projective_side(Coords c) { return c == Coords::ps || c == Coords::pa0; }

IntMatrix inverse_or_throw(const IntMatrix& m) {
    auto inv = unimodular_inverse(m);
    if (!inv) throw DomainError("matrix is not unimodular");
    return *inv;
}

}  // namespace

Vec change_basis(const BasicSetState& st, const Vec& x, Coords from, Coords to) {
    if (from == to) return x;
    if ((brauer_side(from) && projective_side(to)) || (projective_side(from) && brauer_side(to)))
        throw DomainError("cannot convert between Brauer and projective coordinates");
    std::size_t m = st.size();
    auto want = [&](std::size_t n) {
        if (x.size() != n) throw DomainError("coordinate vector has the wrong length");
    };
    if (brauer_side(to)) {
        Vec c;
        if (from == Coords::irr) {
            want(st.s.rows);
            c = row_times(x, st.s);
        } else if (from == Coords::ba) {
            want(m);
            c = row_times(x, inverse_or_throw(st.u));
        } else {
            want(m);
            c = x;
        }
        return to == Coords::bs0 ? c : row_times(c, st.u);
    }
    if (projective_side(to)) {
        Vec pa;
        if (from == Coords::irr) {
            want(st.s.rows);
            for (std::size_t i : st.bs0) pa.push_back(x[i]);
        } else if (from == Coords::ps) {
            want(m);
            pa = times_col(st.u, x);
        } else {
            want(m);
            pa = x;
        }
        return to == Coords::pa0 ? pa : times_col(inverse_or_throw(st.u), pa);
    }
    throw DomainError("conversion to ordinary coordinates is not determined");
}

IntMatrix pairing(const IntMatrix& p_over_pa, const IntMatrix& b_over_bs) {
    if (p_over_pa.cols != b_over_bs.cols) throw DomainError("coordinate lengths differ");
    return p_over_pa * transpose(b_over_bs);
}

// ---------------------------------------------------------------------------
// Fundamental Problem I

void Fp1Instance::validate() const {
    std::size_t m = u.rows;
    if (u.cols != m || m == 0) throw DomainError("U must be square and nonempty");
    if (!nonneg(u)) throw DomainError("U has negative entries");
    if (abs(det(u)) != 1) throw DomainError("U is not unimodular");
    if (v.rows && v.cols != m) throw DomainError("V has the wrong width");
    if (w.rows && w.cols != m) throw DomainError("W has the wrong width");
}

bool is_fp1_solution(const Fp1Instance& inst, const IntMatrix& u1, const IntMatrix& u2) {
    if (!nonneg(u1) || !nonneg(u2)) return false;
    if (abs(det(u1)) != 1 || abs(det(u2)) != 1) return false;
    if (!(u1 * u2 == inst.u)) return false;
    if (inst.v.rows && !nonneg(inst.v * u1)) return false;
    if (inst.w.rows && !nonneg(inst.w * transpose(u2))) return false;
    return true;
}

namespace {

using I64 = long long;

I64 small(const BigInt& x) {
    if (!x.fits_slong_p() || abs(x) > (1L << 40)) throw DomainError("entry too large for the enumerator");
    return x.get_si();
}

std::vector<I64> small_matrix(const IntMatrix& m) {
    std::vector<I64> out;
    for (const auto& x : m.a) out.push_back(small(x));
    return out;
}

Fp1Solution canonical(std::size_t m, const std::vector<std::vector<I64>>& as, const std::vector<std::vector<I64>>& bs) {
    std::vector<std::size_t> order(m);
    for (std::size_t k = 0; k < m; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return as[x] > as[y]; });
    Fp1Solution s{IntMatrix(m, m), IntMatrix(m, m)};
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t r = 0; r < m; ++r) {
            s.u1(r, k) = static_cast<long>(as[order[k]][r]);
            s.u2(k, r) = static_cast<long>(bs[order[k]][r]);
        }
    return s;
}

// A linear constraint lo <= c.x <= hi over the enumerated vector.
struct LinCon {
    std::vector<I64> c;
    I64 lo, hi;
};

constexpr I64 unbounded = std::numeric_limits<I64>::max();

// Calls emit for every integer x with lo <= x <= hi coordinatewise that
// satisfies the constraints. Partial assignments are cut as soon as the
// remaining coordinates cannot bring a constraint back into range.
void box_enum(const std::vector<I64>& lo, const std::vector<I64>& hi, const std::vector<LinCon>& cons,
              const std::function<void(const std::vector<I64>&)>& emit) {
    std::size_t n = lo.size();
    std::vector<std::size_t> free;
    std::vector<I64> x = lo;
    std::vector<I64> acc(cons.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (hi[i] < lo[i]) return;
        if (hi[i] > lo[i])
            free.push_back(i);
        else
            for (std::size_t k = 0; k < cons.size(); ++k) acc[k] += cons[k].c[i] * lo[i];
    }
    std::size_t f = free.size();
    std::vector<std::vector<I64>> mn(cons.size(), std::vector<I64>(f + 1, 0)), mx = mn;
    for (std::size_t k = 0; k < cons.size(); ++k)
        for (std::size_t p = f; p-- > 0;) {
            std::size_t i = free[p];
            I64 a = cons[k].c[i] * lo[i], b = cons[k].c[i] * hi[i];
            mn[k][p] = mn[k][p + 1] + std::min(a, b);
            mx[k][p] = mx[k][p + 1] + std::max(a, b);
        }
    std::function<void(std::size_t)> rec = [&](std::size_t p) {
        for (std::size_t k = 0; k < cons.size(); ++k) {
            if (acc[k] + mx[k][p] < cons[k].lo) return;
            if (cons[k].hi != unbounded && acc[k] + mn[k][p] > cons[k].hi) return;
        }
        if (p == f) {
            emit(x);
            return;
        }
        std::size_t i = free[p];
        for (I64 v = lo[i]; v <= hi[i]; ++v) {
            x[i] = v;
            for (std::size_t k = 0; k < cons.size(); ++k) acc[k] += cons[k].c[i] * v;
            rec(p + 1);
            for (std::size_t k = 0; k < cons.size(); ++k) acc[k] -= cons[k].c[i] * v;
        }
        x[i] = lo[i];
    };
    rec(0);
}

// Depth-first search over rank-one terms a b^t of U = U1 U2, with a a
// column of U1 and b the matching row of U2. Every node covers one nonzero
// entry of the residual. The terms satisfy b_k^t U^-1 a_l = delta_kl, which
// is equivalent to the residual dropping rank by one with each term.
class Fp1Search {
public:
    Fp1Search(const Fp1Instance& inst, const Fp1Options& opt) : m_(inst.u.rows), opt_(opt) {
        u_ = small_matrix(inst.u);
        auto inv = unimodular_inverse(inst.u);
        if (!inv) throw DomainError("U is not unimodular");
        ui_ = small_matrix(*inv);
        for (std::size_t r = 0; r < inst.v.rows; ++r) v_.push_back({small_row(inst.v.row(r)), 0, unbounded});
        for (std::size_t r = 0; r < inst.w.rows; ++r) w_.push_back({small_row(inst.w.row(r)), 0, unbounded});
        pinned_.assign(m_, false);
        for (std::size_t j : opt.pim_columns ? *opt.pim_columns : detect_atom_pims(inst.u)) {
            if (j >= m_) throw DomainError("PIM column out of range");
            pinned_[j] = true;
        }
        start_ = std::chrono::steady_clock::now();
    }

    Fp1Result run() {
        complete_ = true;
        std::vector<std::vector<I64>> as, bs;
        dfs(u_, as, bs);
        Fp1Result out;
        out.solutions.assign(found_.begin(), found_.end());
        out.complete = complete_;
        out.nodes = nodes_;
        return out;
    }

private:
    std::vector<I64> small_row(const Vec& v) {
        std::vector<I64> out;
        for (const auto& x : v) out.push_back(small(x));
        return out;
    }
    I64& at(std::vector<I64>& r, std::size_t i, std::size_t j) const { return r[i * m_ + j]; }
    I64 at(const std::vector<I64>& r, std::size_t i, std::size_t j) const { return r[i * m_ + j]; }

    bool out_of_budget() {
        if (nodes_ >= opt_.node_budget) return true;
        if ((nodes_ & 1023) == 0) {
            double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
            if (s > opt_.seconds) timed_out_ = true;
        }
        return timed_out_;
    }

    // log of the size of the box of terms through (i, j).
    double weight(const std::vector<I64>& r, std::size_t i, std::size_t j) const {
        if (pinned_[j]) return -1;  // a is the whole residual column
        double w = 0;
        for (std::size_t k = 0; k < m_; ++k) {
            if (k != i) w += std::log1p(static_cast<double>(at(r, k, j)));
            if (k != j) w += std::log1p(static_cast<double>(at(r, i, k)));
        }
        return w;
    }

    void dfs(const std::vector<I64>& r, std::vector<std::vector<I64>>& as, std::vector<std::vector<I64>>& bs) {
        if (out_of_budget()) {
            complete_ = false;
            return;
        }
        ++nodes_;
        std::size_t bi = m_, bj = m_;
        double best = 0;
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < m_; ++j)
                if (at(r, i, j) != 0) {
                    double w = weight(r, i, j);
                    if (bi == m_ || w < best) bi = i, bj = j, best = w;
                }
        if (bi == m_) {
            if (as.size() == m_) found_.insert(canonical(m_, as, bs));
            return;
        }
        if (as.size() == m_) return;

        std::vector<LinCon> aeq = v_, beq = w_;
        for (const auto& b : bs) {
            std::vector<I64> c(m_, 0);  // b^t U^-1
            for (std::size_t j = 0; j < m_; ++j)
                for (std::size_t k = 0; k < m_; ++k) c[j] += b[k] * ui_[k * m_ + j];
            aeq.push_back({c, 0, 0});
        }
        for (const auto& a : as) beq.push_back({ui_times(a), 0, 0});

        std::vector<std::pair<std::vector<I64>, std::vector<I64>>> terms;
        I64 rij = at(r, bi, bj);
        for (I64 ai = 1; ai <= rij; ++ai)
            for (I64 bj_val = 1; ai * bj_val <= rij; ++bj_val) {
                std::vector<I64> lo(m_, 0), hi(m_);
                for (std::size_t k = 0; k < m_; ++k) hi[k] = at(r, k, bj) / bj_val;
                lo[bi] = hi[bi] = ai;
                if (pinned_[bj]) {
                    // The column of U2 is a unit vector: this term covers
                    // the whole residual column.
                    if (bj_val != 1) continue;
                    for (std::size_t k = 0; k < m_; ++k) lo[k] = hi[k] = at(r, k, bj);
                    if (ai != at(r, bi, bj)) continue;
                }
                box_enum(lo, hi, aeq, [&](const std::vector<I64>& a) {
                    std::vector<I64> blo(m_, 0), bhi(m_, unbounded);
                    for (std::size_t k = 0; k < m_; ++k)
                        if (a[k] > 0)
                            for (std::size_t c = 0; c < m_; ++c) bhi[c] = std::min(bhi[c], at(r, k, c) / a[k]);
                    if (bhi[bj] < bj_val) return;
                    blo[bj] = bhi[bj] = bj_val;
                    auto cons = beq;
                    cons.push_back({ui_times(a), 1, 1});
                    box_enum(blo, bhi, cons, [&](const std::vector<I64>& b) { terms.emplace_back(a, b); });
                });
            }

        for (auto& [a, b] : terms) {
            std::vector<I64> r2 = r;
            for (std::size_t i = 0; i < m_; ++i)
                if (a[i])
                    for (std::size_t j = 0; j < m_; ++j) at(r2, i, j) -= a[i] * b[j];
            as.push_back(a);
            bs.push_back(b);
            dfs(r2, as, bs);
            as.pop_back();
            bs.pop_back();
            if (!complete_ && (timed_out_ || nodes_ >= opt_.node_budget)) return;
        }
    }

    std::vector<I64> ui_times(const std::vector<I64>& a) const {
        std::vector<I64> c(m_, 0);  // U^-1 a
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t k = 0; k < m_; ++k) c[i] += ui_[i * m_ + k] * a[k];
        return c;
    }

    std::size_t m_;
    Fp1Options opt_;
    std::vector<I64> u_, ui_;
    std::vector<LinCon> v_, w_;
    std::vector<bool> pinned_;
    std::set<Fp1Solution> found_;
    std::uint64_t nodes_ = 0;
    bool complete_ = true, timed_out_ = false;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace

Fp1Result enumerate_fp1(const Fp1Instance& inst, const Fp1Options& opt) {
    inst.validate();
    return Fp1Search(inst, opt).run();
}

std::vector<Fp1Solution> brute_force_fp1(const Fp1Instance& inst) {
    inst.validate();
    std::size_t m = inst.u.rows;
    if (m > 3) throw DomainError("brute force is limited to m <= 3");
    long top = 0;
    for (const auto& x : inst.u.a) top = std::max(top, x.get_si());
    std::set<Fp1Solution> found;
    IntMatrix u1(m, m);
    std::size_t cells = m * m;
    std::vector<long> digit(cells, 0);
    while (true) {
        for (std::size_t c = 0; c < cells; ++c) u1.a[c] = digit[c];
        if (auto inv = unimodular_inverse(u1)) {
            IntMatrix u2 = *inv * inst.u;
            if (is_fp1_solution(inst, u1, u2)) {
                std::vector<std::vector<I64>> as(m, std::vector<I64>(m)), bs = as;
                for (std::size_t k = 0; k < m; ++k)
                    for (std::size_t r = 0; r < m; ++r) {
                        as[k][r] = u1(r, k).get_si();
                        bs[k][r] = u2(k, r).get_si();
                    }
                found.insert(canonical(m, as, bs));
            }
        }
        std::size_t c = 0;
        while (c < cells && digit[c] == top) digit[c++] = 0;
        if (c == cells) break;
        ++digit[c];
    }
    return {found.begin(), found.end()};
}

// ---------------------------------------------------------------------------
// Fixture files

IntMatrix LabelledMatrix::bind(const std::map<std::string, long>& values) const {
    IntMatrix m(cells.size(), cells.empty() ? 0 : cells[0].size());
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = 0; j < cells[i].size(); ++j) {
            const auto& s = cells[i][j];
            if (std::isalpha(static_cast<unsigned char>(s[0]))) {
                auto it = values.find(s);
                if (it == values.end()) throw DomainError("unbound placeholder " + s);
                m(i, j) = it->second;
            } else {
                m(i, j) = parse_bigint(s);
            }
        }
    return m;
}

const LabelledMatrix& FixtureFile::matrix(const std::string& name) const {
    auto it = matrices.find(name);
    if (it == matrices.end()) throw FormatError("fixture has no matrix " + name);
    return it->second;
}

FixtureFile read_fixture(std::istream& in) {
    FixtureFile f;
    std::string line;
    auto words = [](const std::string& s) {
        std::istringstream is(s);
        std::vector<std::string> w;
        std::string t;
        while (is >> t) w.push_back(t);
        return w;
    };
    while (std::getline(in, line)) {
        auto w = words(line);
        if (w.empty() || w[0][0] == '#') continue;
        if (w[0] != "matrix") {
            f.keys[w[0]] = std::vector<std::string>(w.begin() + 1, w.end());
            continue;
        }
        if (w.size() != 4) throw FormatError("bad matrix header: " + line);
        std::size_t r = std::stoul(w[2]), c = std::stoul(w[3]);
        LabelledMatrix lm;
        for (std::size_t i = 0; i < r; ++i) {
            if (!std::getline(in, line)) throw FormatError("matrix " + w[1] + " is truncated");
            auto cells = words(line);
            if (cells.size() != c + 1) throw FormatError("matrix " + w[1] + ": row " + std::to_string(i) + " has the wrong length");
            lm.labels.push_back(cells[0]);
            lm.cells.emplace_back(cells.begin() + 1, cells.end());
        }
        f.matrices[w[1]] = std::move(lm);
    }
    return f;
}

FixtureFile load_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    return read_fixture(in);
}

}  // namespace moc
