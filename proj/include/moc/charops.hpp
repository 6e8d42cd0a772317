#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "moc/chartable.hpp"

namespace moc {

using TablePtr = std::shared_ptr<const MocTable>;

enum class CharKind { ordinary, brauer, projective, virtual_ };

struct ClassFunction {
    TablePtr table;
    Vec coeffs;
    CharKind kind = CharKind::ordinary;
    long p = 0;  // for brauer and projective

    static ClassFunction row(const TablePtr& t, std::size_t i);
    Cyc value(std::size_t cls) const { return table->value(coeffs, cls); }
    BigInt degree() const { return table->degree(coeffs); }
    ClassFunction operator+(const ClassFunction& o) const;
    ClassFunction operator-(const ClassFunction& o) const;
    ClassFunction operator*(const BigInt& s) const;
    bool operator==(const ClassFunction& o) const { return table == o.table && coeffs == o.coeffs; }
};

std::string kind_name(CharKind k, long p);

Rational inner_product(const ClassFunction& x, const ClassFunction& y);

// Zero on the p-singular families.
ClassFunction hat_restrict(const ClassFunction& x, long p);
// The class function is zero on every p-singular family.
bool vanishes_off_regular(const ClassFunction& x, long p);

// H-class -> G-class.
struct FusionMap {
    TablePtr sub, super;
    std::vector<std::size_t> map;
    void validate() const;
};

// "fusion" lines: one "H-CLASS G-CLASS" pair per line.
FusionMap read_fusion(std::istream& in, const TablePtr& sub, const TablePtr& super);

enum class Direction { induce, restrict };
ClassFunction transfer(const ClassFunction& x, const FusionMap& f, Direction dir);

ClassFunction tensor(const ClassFunction& x, const ClassFunction& y);

// Character table of S_r on the partitions of r, with optional extended
// p-modular table Sigma_{r,p} and the Weyl-module multiplicities M_{r,p}.
// Rows and columns follow the partition order, where the partitions are
// listed so that M_{r,p} is lower unitriangular: (1,1,1), (2,1), (3).
struct SymmetrizationData {
    int r = 0;
    std::vector<std::vector<int>> partitions;
    std::vector<BigInt> centralizers;
    IntMatrix irr;  // irr(lambda, rho)
    long p = 0;
    std::optional<IntMatrix> m, sigma;
};

// Shipped data: r <= 3 ordinary, and Sigma_{3,3}.
const SymmetrizationData& symmetrization_data(int r, long p);
SymmetrizationData read_symmetrization_data(std::istream& in);
void register_symmetrization_data(SymmetrizationData d);

ClassFunction symmetrize(const ClassFunction& x, const std::vector<int>& lambda, long p);
// Symmetric (sign +1) and skew (sign -1) squares; p = 2 is rejected.
ClassFunction square(const ClassFunction& x, int sign, long p);

// Keeps the constituents in `block` of the expression of x over
// `basis_rows` (default: the rows of the table).
ClassFunction block_project(const ClassFunction& x, const std::vector<std::size_t>& block,
                            const std::vector<Vec>* basis_rows = nullptr);

bool is_virtual_projective(const ClassFunction& x, long p);

// Coefficients over the rows, or nullopt when x is outside their lattice.
std::optional<Vec> irr_coefficients(const ClassFunction& x, const std::vector<Vec>& rows);

}  // namespace moc
