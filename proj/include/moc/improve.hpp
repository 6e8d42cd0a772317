#pragma once

#include <optional>
#include <string>
#include <vector>

#include "moc/basis.hpp"
#include "moc/chartable.hpp"
#include "moc/ilp.hpp"

namespace moc {

// A proof step with enough data to check it again.
struct ProofEvent {
    enum class Kind { atom_pim, pim_test, irr_test, subsum_test, subtract, triangular, split, prune, parity };
    Kind kind;
    std::vector<std::string> inputs;
    std::string conclusion;
    // ILPs whose outcome carries the step: infeasible for the part tests,
    // the bit minima for a subtraction.
    std::vector<IlpProblem> ilps;
    std::vector<Vec> uppers;  // box bounds for ilps, empty when unbounded
    std::vector<BigInt> values;  // optimum per ilp when relevant, and z last
    std::vector<Vec> rows;  // relation rows or certificate vectors
};

std::string kind_name(ProofEvent::Kind k);
// Re-derives the conclusion from the certificate alone.
bool replay(const ProofEvent& e);

// The basic sets BS, PS with U = <BS, PS>, extra Brauer characters B as
// rows over BS and extra projectives P as rows over PS.
struct ImproveContext {
    BasicSetState state;
    IntMatrix b, p;
    std::vector<std::string> bs_names, ps_names, b_names, p_names;
    GomoryOptions gomory;
    std::vector<ProofEvent> log;

    std::size_t s() const { return state.u.rows; }
    // <B_k, PS_j> and <BS_i, P_k>.
    IntMatrix b_pairings() const { return b * state.u; }
    IntMatrix p_pairings() const { return state.u * transpose(p); }
    std::string ps_name(std::size_t j) const;
    std::string bs_name(std::size_t i) const;
    void validate() const;
};

enum class Verdict { proved, inconclusive };

struct PartTest {
    Verdict verdict = Verdict::inconclusive;
    IlpProblem system;       // over the support of the vector
    std::vector<std::size_t> support;
    std::optional<Vec> part;  // a part passing every check (full length)
};

// Parts 0 <= n' <= n with n' != 0, n that have nonnegative products with
// every relation row on both n' and n - n'. No such part: proved.
PartTest part_test(const Vec& n, const IntMatrix& relations, const GomoryOptions& opt = {});

// Thm. on parts with B; on proof the column is added to the known PIMs.
PartTest pim_test(ImproveContext& ctx, std::size_t j);
// The same with the roles of B and P exchanged.
PartTest irr_test(ImproveContext& ctx, std::size_t i);
// pim_test on every column not yet known to be a PIM; the searches run
// concurrently, the state is updated afterwards in column order.
std::vector<std::size_t> pim_test_all(ImproveContext& ctx);

// Searches for a subsum 0 <= a' <= a, a' != 0, a, of the ordinary
// characters that vanishes on the p-singular classes. None: indecomposable.
struct SubsumTest {
    Verdict verdict = Verdict::inconclusive;
    std::optional<Vec> subsum;
};
// irr_coeffs has one entry per row of t. Boxes up to 2^20 points are
// searched exhaustively, larger ones through an ILP.
SubsumTest subsum_test(const MocTable& t, const Vec& irr_coeffs, long p, const GomoryOptions& opt = {},
                       std::vector<ProofEvent>* log = nullptr);

// m_ij: nullopt is infinity.
using MaxMult = std::vector<std::vector<std::optional<BigInt>>>;
MaxMult max_multiplicities(const ImproveContext& ctx);

struct Subtraction {
    BigInt z;
    Vec reduced;  // Sigma - z Phi over PS
    bool max_rule = true;  // Phi indecomposable; otherwise multiplicity free
    std::vector<std::size_t> phis;  // the BS indices used
    std::vector<IlpProblem> systems;  // bits over the free coordinates
    std::vector<Vec> uppers;
    std::vector<std::vector<std::size_t>> free;  // PS indices of the variables, per system
    std::vector<BigInt> constants;  // <phi', Sigma> - c.x
    std::vector<std::optional<BigInt>> minima;  // of <phi', Sigma>; nullopt: aborted
};

// The bit system of phi = BS_r with respect to PS_f.
struct BitSystem {
    IlpProblem system;
    Vec upper;
    std::vector<std::size_t> free;
    BigInt constant;
};
BitSystem bit_system(const ImproveContext& ctx, const MaxMult& m, std::size_t f, std::size_t r, const Vec& sigma);

// Phi = PS_f, Sigma given over PS. Phi must be a known PIM (max rule) or
// multiplicity free (min rule).
Subtraction subtract_indecomposable(ImproveContext& ctx, std::size_t f, const Vec& sigma);

// Replaces PS_k by the projective with PS coordinates w; w_k must be +-1.
// U and the P rows follow.
void replace_ps(ImproveContext& ctx, std::size_t k, const Vec& w);

// Lexicographic order on projectives by their columns of <BS, .>.
bool lex_smaller(const Vec& x, const Vec& y);

// The sweep over (i, j0) with z from the negative coefficients of P,
// repeated until nothing changes. Requires U lower unitriangular.
// Returns the number of replacements.
std::size_t triangular_reduce(ImproveContext& ctx);

struct Split {
    bool split = false;
    Vec psi1, psi2;  // PA coordinates
    std::string diagnostics;
};
Split split_decomposable(ImproveContext& ctx, std::size_t i);

struct Prune {
    std::vector<std::size_t> essential;  // indices into P, in admission order
    struct Discard {
        std::size_t index;
        QVec coefficients;  // over E \ PS (admission order) then PS
    };
    std::vector<Discard> discarded;
};
Prune prune_essential(ImproveContext& ctx);

// Fong's lemma at p = 2: for real chi the multiplicity of the trivial
// Brauer character is congruent to chi(1) mod 2. `projectives` are
// columns over Irr(B); `trivial` is the row of the trivial character.
struct Parity {
    std::vector<std::pair<std::size_t, int>> parity;  // real chi with chi(1) mod 2
    std::optional<std::size_t> carrier;  // projective containing the trivial PIM once
    std::optional<Vec> trivial_pim;      // when the bounds determine it
    std::vector<std::size_t> contained;  // projectives equal to carrier - trivial PIM
};
Parity fong_parity(const IntMatrix& projectives, const std::vector<BigInt>& degrees, const std::vector<bool>& real,
                   std::size_t trivial, long p, std::vector<ProofEvent>* log = nullptr);

}  // namespace moc
