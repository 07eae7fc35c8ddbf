#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nilspec/bigint.hpp"
#include "nilspec/errors.hpp"
#include "nilspec/extnat.hpp"

namespace nilspec {

// Dense matrix over Z with arbitrary-precision entries, row-major storage.
// 0-dimensional matrices are legal: det of a 0x0 matrix is 1 (empty product),
// which is exactly what trivial centers and quotients need.
class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<IntVec>& rows);
    // columns of the result are the given vectors
    static IntMatrix from_columns(const std::vector<IntVec>& cols, std::size_t dim);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Int& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    IntVec row(std::size_t i) const;
    IntVec column(std::size_t j) const;

    bool operator==(const IntMatrix& o) const = default;

    IntMatrix operator*(const IntMatrix& o) const;
    IntMatrix operator+(const IntMatrix& o) const;
    IntMatrix operator-(const IntMatrix& o) const;
    IntVec apply(const IntVec& v) const;
    IntMatrix transpose() const;

    bool is_zero() const;

private:
    std::size_t rows_, cols_;
    std::vector<Int> a_;
};

// identity(n) - M, the matrix whose cokernel order is a Reidemeister factor
IntMatrix one_minus(const IntMatrix& m);

// Exact determinant by Bareiss fraction-free elimination. Square input only.
Int det(const IntMatrix& m);

// U*M*V = D with U, V unimodular and D diagonal, d1 | d2 | ..., di >= 0.
// Pivoting is fixed (smallest nonzero absolute value, then row-major), so the
// decomposition is reproducible across runs.
struct SnfResult {
    IntMatrix U, D, V;
};
SnfResult smith_normal_form(const IntMatrix& m);

IntVec snf_diagonal(const SnfResult& s);

// |Z^n / im(M)| for square M: product of the SNF diagonal if all entries are
// nonzero, infinity otherwise. Equals |det M| when det M != 0.
ExtNat cokernel_order(const IntMatrix& m);

// Basis of {x : M x = 0} as a saturated sublattice (columns of V at the zero
// diagonal positions, hence a direct summand of Z^cols).
std::vector<IntVec> kernel_basis(const IntMatrix& m);

// Smallest sublattice containing span(B) whose quotient is torsion-free; the
// lattice analogue of the isolator of a subgroup.
std::vector<IntVec> saturation(const std::vector<IntVec>& basis);

// Basis of the lattice spanned by the given vectors (not saturated).
std::vector<IntVec> lattice_basis(const std::vector<IntVec>& spanning);

// Inverse of a unimodular matrix; throws DomainError when |det| != 1.
IntMatrix integer_inverse(const IntMatrix& m);

// One integer solution of M x = b, or nullopt when none exists. Homogeneous
// solutions come from kernel_basis.
std::optional<IntVec> solve(const IntMatrix& m, const IntVec& b);

// Is v in the lattice spanned by the basis vectors?
bool in_lattice(const std::vector<IntVec>& basis, const IntVec& v);

// Coordinate chart for Z^ambient / span(sub_basis), sub_basis saturated.
// P is unimodular with its first `sub_rank` columns spanning the sublattice;
// the remaining columns are the deterministic complement basis.
class QuotientChart {
public:
    QuotientChart(std::size_t ambient, const std::vector<IntVec>& sub_basis);

    std::size_t ambient() const { return ambient_; }
    std::size_t sub_rank() const { return sub_rank_; }
    std::size_t quotient_rank() const { return ambient_ - sub_rank_; }

    const IntMatrix& basis() const { return p_; }

    // coordinates of v in the quotient (last ambient - sub_rank chart coords)
    IntVec project(const IntVec& v) const;
    // chart coordinates of a sublattice member; nullopt if v is not in it
    std::optional<IntVec> sub_coordinates(const IntVec& v) const;

    struct Split {
        IntMatrix on_sub;      // action on the sublattice in chart coordinates
        IntMatrix on_quotient; // induced action on the quotient
        bool invariant;        // false when M does not preserve the sublattice
    };
    Split split(const IntMatrix& m) const;

private:
    std::size_t ambient_, sub_rank_;
    IntMatrix p_, p_inv_;
};

// Matrix of the map induced by M on Z^n / span(K); requires M to preserve
// span(K) and K to be saturated, else throws DomainError.
IntMatrix quotient_action(const IntMatrix& m, const std::vector<IntVec>& k);

} // namespace nilspec
