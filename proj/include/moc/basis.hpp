#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "moc/charops.hpp"
#include "moc/intlin.hpp"

namespace moc {

// Result of testing whether a subset of the restricted irreducibles is a
// basic set. `relations` has one row per non-candidate row of the input
// (in input order) giving it over the candidate. A rejection carries either
// a nonzero integer dependency among the candidate rows or the index of a
// row that is not an integral combination of them.
struct BasicSetCheck {
    bool basic = false;
    std::vector<std::size_t> others;
    IntMatrix relations;
    Vec dependency;
    std::optional<std::size_t> non_integral_row;
};

// hat_rows: every restricted irreducible of the block in any fixed
// coordinates. Throws Inconclusive when the q-adic solver gives up.
BasicSetCheck certify_brauer_basic(const std::vector<Vec>& hat_rows, const std::vector<std::size_t>& candidate,
                                   const DecOptions& opt = {});
BasicSetCheck certify_brauer_basic(const std::vector<ClassFunction>& hat_chars, const std::vector<std::size_t>& candidate,
                                   const DecOptions& opt = {});

struct PairCheck {
    bool basic_pair = false;
    BigInt det;
    IntMatrix u;
};
PairCheck certify_pair(const IntMatrix& u);
// U = (<bs_i, ps_j>); the inner products must be integers.
PairCheck certify_pair(const std::vector<ClassFunction>& bs, const std::vector<ClassFunction>& ps);

// Z-rank of the restricted rows.
std::size_t ibr_count(const std::vector<Vec>& hat_rows);
std::size_t ibr_count(const MocTable& t, const std::vector<std::size_t>& block, long p);

// Columns of U that are unit vectors: projectives in the basic set that
// are atoms, hence PIMs. Rows of U that are unit vectors are the Brauer
// characters of the basic set that are irreducible.
std::vector<std::size_t> detect_atom_pims(const IntMatrix& u);
std::vector<std::size_t> detect_atom_irreducibles(const IntMatrix& u);

// A special basic set BS0 (indices into Irr(B)) with the relations S,
// [Irr^(B)] = S [BS0], and U = X0 = <BS0, PS>. PS and BS are the
// projective and Brauer basic sets, PA and BA their dual atoms.
struct BasicSetState {
    int block = 0;
    std::vector<std::size_t> bs0;
    IntMatrix s;
    IntMatrix u;
    std::set<std::size_t> known_pims;
    std::set<std::size_t> known_irreducibles;

    std::size_t size() const { return bs0.size(); }
    void validate() const;
};

// Coordinate systems for change_basis. Brauer-side: Irr (coefficients of
// ordinary characters, restricted), BS0, BA. Projective-side: Irr
// (ordinary coefficients of a projective), PS, PA0.
enum class Coords { irr, bs0, ba, ps, pa0 };

// Converts a row of coordinates. Brauer: irr -> bs0 -> ba and back;
// projective: irr -> pa0, ps <-> pa0. Inverse directions need unimodular
// matrices and raise DomainError otherwise, as do mixed-side requests.
Vec change_basis(const BasicSetState& st, const Vec& x, Coords from, Coords to);

// <P, B> = W V^t for P given over PA and B over BS.
IntMatrix pairing(const IntMatrix& p_over_pa, const IntMatrix& b_over_bs);

// Fundamental Problem I: all U = U1 U2 with U1, U2 >= 0 unimodular,
// V U1 >= 0 and W U2^t >= 0, up to simultaneous permutation.
struct Fp1Instance {
    IntMatrix u, v, w;
    void validate() const;
};

struct Fp1Solution {
    IntMatrix u1, u2;  // columns of u1 in decreasing lexicographic order, rows of u2 with them
    bool operator<(const Fp1Solution& o) const { return u1.a < o.u1.a; }
};

struct Fp1Options {
    std::uint64_t node_budget = 100'000'000;
    double seconds = 1800;
    // Columns of U known to be PIMs; by default the atom columns.
    std::optional<std::vector<std::size_t>> pim_columns;
};

struct Fp1Result {
    std::vector<Fp1Solution> solutions;
    bool complete = false;
    std::uint64_t nodes = 0;
};

Fp1Result enumerate_fp1(const Fp1Instance& inst, const Fp1Options& opt = {});

// Checks a factorization against every condition of the problem.
bool is_fp1_solution(const Fp1Instance& inst, const IntMatrix& u1, const IntMatrix& u2);

// Exhaustive search over all U1 with entries bounded by the largest entry of
// U; only for m <= 3.
std::vector<Fp1Solution> brute_force_fp1(const Fp1Instance& inst);

// Labelled integer matrices: "matrix NAME ROWS COLS" followed by ROWS lines
// "LABEL v1 .. vCOLS"; other lines are "KEY values...". A cell may be a
// letter, which is kept as a placeholder and read back through `bind`.
struct LabelledMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<std::string>> cells;
    IntMatrix bind(const std::map<std::string, long>& values = {}) const;
};
struct FixtureFile {
    std::map<std::string, std::vector<std::string>> keys;
    std::map<std::string, LabelledMatrix> matrices;
    const LabelledMatrix& matrix(const std::string& name) const;
};
FixtureFile read_fixture(std::istream& in);
FixtureFile load_fixture(const std::string& path);

}  // namespace moc
