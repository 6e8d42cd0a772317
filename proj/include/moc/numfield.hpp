#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "moc/cyclo.hpp"
#include "moc/intlin.hpp"

namespace moc {

// Subgroup H of (Z/fZ)^*; its fixed field is the abelian field L.
struct GaloisSubgroup {
    long f = 1;
    std::vector<long> generators;

    std::vector<long> elements() const;  // sorted
    long order() const { return static_cast<long>(elements().size()); }
    long degree() const;                 // [L : Q] = phi(f) / |H|
    bool contains(long a) const;
    // Primes p | f for which H contains the kernel of (Z/f)^* -> (Z/(f/p))^*.
    std::vector<long> conductor_defects() const;
    // The same field over its true conductor.
    GaloisSubgroup reduced() const;
    // Coset representatives of (Z/f)^* / H, smallest first; the first is 1.
    std::vector<long> galois_coset_reps() const;
};

enum class ConductorPolicy { reject, reduce };

class OrbitSumBasis {
public:
    // Builds the basis from explicit representative exponents and checks that
    // it spans the ring of integers of the fixed field.
    static std::shared_ptr<const OrbitSumBasis> with_reps(const GaloisSubgroup& g, std::vector<long> reps);

    const GaloisSubgroup& field() const { return field_; }
    const std::vector<long>& reps() const { return reps_; }
    std::size_t dim() const { return reps_.size(); }
    const Cyc& element(std::size_t i) const { return elems_[i]; }
    // Exponents of the H-orbit of reps()[i] as a set.
    std::vector<long> orbit(std::size_t i) const;

    Cyc value(const Vec& coeffs) const;
    // Coordinates of x in this basis; nullopt when x is not an integral
    // combination of the basis elements.
    std::optional<Vec> coordinates(const Cyc& x) const;
    // Matrix of coordinates of sigma_k applied to the basis elements
    // (row i = coordinates of sigma_k(b_i)).
    IntMatrix galois_matrix(long k) const;

private:
    OrbitSumBasis() = default;
    GaloisSubgroup field_;
    std::vector<long> reps_;
    std::vector<Cyc> elems_;
    std::vector<long> pivots_;  // coordinate positions where the basis matrix is invertible
    RatMatrix pivot_inverse_;
    friend std::shared_ptr<const OrbitSumBasis> make_basis(const GaloisSubgroup&, std::vector<long>, bool);
};

using BasisPtr = std::shared_ptr<const OrbitSumBasis>;

// Integral basis of orbit sums following the constructive proof of the
// integral-basis theorem for abelian fields.
BasisPtr orbit_sum_basis(const GaloisSubgroup& g, ConductorPolicy policy = ConductorPolicy::reject);

struct MultTable {
    std::size_t d = 0;
    std::vector<Vec> c;  // c[i*d + j] = coordinates of b_i * b_j
    const Vec& at(std::size_t i, std::size_t j) const { return c[i * d + j]; }
};

MultTable mult_table(const OrbitSumBasis& b);

struct FieldElement {
    BasisPtr basis;
    Vec coeffs;
};

FieldElement elem_mul(const FieldElement& x, const FieldElement& y);
FieldElement elem_mul(const FieldElement& x, const FieldElement& y, const MultTable& t);

// Gram matrix of the trace form (Tr(b_i b_j)); its determinant is the
// square of det(sigma_j(b_k)), i.e. the discriminant of the field.
IntMatrix trace_form(const OrbitSumBasis& b);

// Fixed lattice Z[zeta_f]^H in reduced cyclotomic coordinates (rows).
IntMatrix fixed_lattice(const GaloisSubgroup& g);

// Cached bases and multiplication tables keyed by conductor and generators.
class FieldRegistry {
public:
    struct Entry {
        BasisPtr basis;
        std::shared_ptr<const MultTable> table;
    };
    Entry get(const GaloisSubgroup& g, const std::vector<long>& reps);
    Entry get(const GaloisSubgroup& g);
    void save(std::ostream& out) const;
    void load(std::istream& in);
    std::size_t size() const;

private:
    mutable std::mutex mu_;
    std::map<std::string, Entry> entries_;
    Entry insert(const std::string& key, BasisPtr b);
};

FieldRegistry& default_registry();

}  // namespace moc
