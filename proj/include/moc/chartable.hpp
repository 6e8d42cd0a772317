#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "moc/cyclo.hpp"
#include "moc/intlin.hpp"
#include "moc/numfield.hpp"

namespace moc {

struct ClassInfo {
    std::string name;
    long element_order = 1;
    BigInt centralizer;
    std::map<long, std::size_t> power;  // prime -> class index of g^p

    bool regular(long p) const { return element_order % p != 0; }
};

// An algebraic conjugacy class: the classes whose values are Galois
// conjugates of the values on rep_class. members[0] is rep_class with k = 1.
struct ColumnFamily {
    std::size_t rep_class = 0;
    std::vector<std::size_t> members;
    std::vector<long> galois;  // galois[m]: *k carrying rep_class to members[m]
    BasisPtr basis;
    std::shared_ptr<const MultTable> table;
    // Gram matrix sum over members of sigma(b_j) * conj(sigma(b_l)); integral.
    IntMatrix gram;
    IntMatrix conj;  // coordinates of conj(b_j) as rows
    std::vector<std::vector<Cyc>> values;  // values[m][j] = sigma_{k_m}(b_j)

    std::size_t dim() const { return basis->dim(); }
};

// A character table in the square all-integer column format. For a Brauer
// table (prime > 0) the classes are the p-regular ones and group_order is
// still |G|.
class MocTable {
public:
    std::string name;
    BigInt group_order;
    long prime = 0;
    std::vector<ClassInfo> classes;
    std::vector<ColumnFamily> families;
    std::vector<Vec> rows;
    std::vector<std::string> labels;

    std::size_t width() const { return width_; }
    std::size_t offset(std::size_t fam) const { return offsets_[fam]; }
    std::size_t family_of(std::size_t cls) const { return class_family_[cls].first; }
    std::size_t class_index(const std::string& name) const;

    // Checks the shape and the class and family data and sorts classes
    // (identity, then element order, then centralizer order descending, then
    // input order); families follow their representatives and the row
    // columns are permuted with them.
    void finalize();

    // Value of a coefficient row at a class.
    Cyc value(const Vec& row, std::size_t cls) const;
    std::vector<Cyc> usual_row(const Vec& row) const;
    // Coefficients of x * y (pointwise product) and of the complex conjugate.
    Vec product(const Vec& x, const Vec& y) const;
    Vec conjugate(const Vec& x) const;
    // Sum over classes of x(g) conj(y(g)) |G|/|C_G(g)|, i.e. |G| <x, y>.
    BigInt weighted_pairing(const Vec& x, const Vec& y) const;
    BigInt degree(const Vec& row) const;

private:
    std::size_t width_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<std::pair<std::size_t, std::size_t>> class_family_;  // family, member position
};

std::vector<std::vector<Cyc>> to_usual(const MocTable& t);

// Rebuilds the coefficient rows from usual values (one vector of class
// values per character, classes in table order). Each family is solved on
// its representative and checked against the Galois images on the other
// members. Rows that are not integral over the basis raise DomainError.
std::vector<Vec> from_usual(const MocTable& shape, const std::vector<std::vector<Cyc>>& usual);

// Coefficients of omega_chi(x_i) = |G| chi(x_i) / (|C_G(x_i)| chi(1)) per
// family. With require_integral a non-integral coefficient raises
// DomainError (central characters of irreducibles are algebraic integers).
std::vector<QVec> central_character(const MocTable& t, const Vec& row, bool require_integral = true);

// Parts are lists of row indices, ordered by their first element.
std::vector<std::vector<std::size_t>> block_distribution(const MocTable& t, long p);

struct DefectInfo {
    bool defect_zero = false;
    int block_defect = 0;  // nu_p(|G|) - min nu_p(chi(1)) over the block
};
DefectInfo defect_zero(const MocTable& t, long p, std::size_t row);

int nu_p(BigInt n, long p);

// k-th power map on classes through the stored prime power maps.
std::size_t power_class(const MocTable& t, std::size_t cls, long k);

// Line format:
//   table NAME / order N / prime P / [encoding legacy]
//   class NAME ORDER CENTRALIZER [p:CLASS ...]
//   family CLASS [f F gens g1,g2 reps r1 r2 .. members CLASS:k ..]
//   row LABEL v1 .. vn
//   end
MocTable read_table(std::istream& in);
void write_table(std::ostream& out, const MocTable& t);
MocTable load_table(const std::string& path);

}  // namespace moc
