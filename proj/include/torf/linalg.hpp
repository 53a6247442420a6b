#pragma once

// Exact integer linear algebra: normal forms, kernels and sublattices of Z^n.
// Nothing in here ever rounds.

#include "torf/error.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace torf {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

// Vector helpers.
Int dot(std::span<const Int> a, std::span<const Int> b);
// Sign of the dot product, without allocating.
int dot_sign(std::span<const Int> a, std::span<const Int> b);
IntVec add(std::span<const Int> a, std::span<const Int> b);
IntVec sub(std::span<const Int> a, std::span<const Int> b);
IntVec neg(std::span<const Int> a);
IntVec scale(const Int& c, std::span<const Int> a);
bool is_zero(std::span<const Int> a);
Int content(std::span<const Int> a);
// Divides by the gcd of the entries; the zero vector is returned unchanged.
IntVec primitive(std::span<const Int> a);
// Clears denominators and returns the primitive integer vector on the same ray.
IntVec primitive(std::span<const Rat> a);
IntVec zero_vector(std::size_t n);
IntVec unit_vector(std::size_t n, std::size_t i);
std::string format(std::span<const Int> v);

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(std::size_t cols, std::span<const IntVec> rows);
  static IntMatrix from_columns(std::size_t rows, std::span<const IntVec> cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntVec row(std::size_t i) const;
  IntVec column(std::size_t j) const;
  std::vector<IntVec> columns() const;
  IntMatrix transpose() const;
  IntVec apply(std::span<const Int> x) const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_columns(std::size_t a, std::size_t b);
  // row[a] += c * row[b]
  void add_row_multiple(std::size_t a, std::size_t b, const Int& c);
  // col[a] += c * col[b]
  void add_column_multiple(std::size_t a, std::size_t b, const Int& c);
  void negate_row(std::size_t a);
  void negate_column(std::size_t a);

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

struct HermiteForm {
  IntMatrix H;  // column Hermite normal form of A
  IntMatrix U;  // unimodular, A * U = H
  std::size_t rank = 0;
};

// Column-style HNF.  Pivot columns come first; every pivot is positive and the
// entries to the left of a pivot in its row lie in [0, pivot).
HermiteForm hnf(const IntMatrix& a);

struct SmithForm {
  IntMatrix D;  // diagonal, d_1 | d_2 | ... , all >= 0
  IntMatrix U;  // unimodular (rows x rows)
  IntMatrix V;  // unimodular (cols x cols), U * A * V = D
};

SmithForm snf(const IntMatrix& a);

// Fraction-free (Bareiss) elimination; intermediate values stay integral.
Int determinant(const IntMatrix& a);
std::size_t rank(const IntMatrix& a);

// Some integer x with A x = b, if one exists.
std::optional<IntVec> solve_integer(const IntMatrix& a, std::span<const Int> b);
// Some rational x with A x = b, if one exists (free variables set to zero).
std::optional<RatVec> solve_rational(const IntMatrix& a, std::span<const Int> b);

// A finite-rank subgroup of Z^n, stored as the nonzero columns of the column
// HNF of any generating set.  Two sublattices are equal iff their bases are.
class Sublattice {
 public:
  Sublattice() = default;

  static Sublattice from_generators(std::size_t ambient_rank, std::span<const IntVec> gens);
  static Sublattice full(std::size_t ambient_rank);
  static Sublattice zero(std::size_t ambient_rank);

  std::size_t ambient_rank() const noexcept { return ambient_; }
  std::size_t rank() const noexcept { return basis_.size(); }
  const std::vector<IntVec>& basis() const noexcept { return basis_; }
  IntMatrix basis_matrix() const;

  bool contains(std::span<const Int> v) const;
  // Integer coordinates of v in basis(), if v lies in the lattice.
  std::optional<IntVec> coordinates(std::span<const Int> v) const;
  bool contains(const Sublattice& other) const;

  friend bool operator==(const Sublattice&, const Sublattice&) = default;
  friend auto operator<=>(const Sublattice&, const Sublattice&) = default;

 private:
  std::size_t ambient_ = 0;
  std::vector<IntVec> basis_;
};

// {x in Z^cols : A x = 0}; the result is saturated.
Sublattice kernel_basis(const IntMatrix& a);

// Z^n intersected with the rational span of l.
Sublattice saturate(const Sublattice& l);

bool member_lattice(const Sublattice& l, std::span<const Int> v);

Sublattice intersect(const Sublattice& a, const Sublattice& b);

// [sup : sub]; nullopt stands for an infinite index (rank drop).
std::optional<Int> lattice_index(const Sublattice& sub, const Sublattice& sup);
// Same quantity computed as the product of the invariant factors of the
// inclusion matrix.
std::optional<Int> lattice_index_snf(const Sublattice& sub, const Sublattice& sup);

// The matrix X with sup.basis * X = sub.basis.
IntMatrix inclusion_matrix(const Sublattice& sub, const Sublattice& sup);

// {m in sup : p^e m in sub for some e >= 0}.  Requires sub to have finite
// index in sup.  For p = 0 this is sub itself.
Sublattice p_saturation(const Sublattice& sub, const Sublattice& sup, unsigned long p);

// One representative of each coset of sub in sup (finite index required).
// The zero vector always comes first.
std::vector<IntVec> coset_representatives(const Sublattice& sub, const Sublattice& sup);

// Inverse of a square matrix with determinant +-1.
IntMatrix inverse_unimodular(const IntMatrix& u);

// Calls f on every point of {-bound, ..., bound}^n.
template <class F>
void for_each_box_point(std::size_t n, long bound, F&& f) {
  IntVec x(n, Int(-bound));
  for (;;) {
    f(static_cast<const IntVec&>(x));
    std::size_t i = 0;
    while (i < n && x[i] == bound) x[i++] = -bound;
    if (i == n) return;
    ++x[i];
  }
}

bool is_prime(unsigned long p);

}  // namespace torf
