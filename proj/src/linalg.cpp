#include "torf/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace torf {

namespace {

void require_same_length(std::span<const Int> a, std::span<const Int> b) {
  if (a.size() != b.size())
    throw Error(ErrorKind::DimensionMismatch, "vector lengths differ: " + std::to_string(a.size()) +
                                                  " vs " + std::to_string(b.size()));
}

}  // namespace

Int dot(std::span<const Int> a, std::span<const Int> b) {
  require_same_length(a, b);
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) mpz_addmul(s.get_mpz_t(), a[i].get_mpz_t(), b[i].get_mpz_t());
  return s;
}

int dot_sign(std::span<const Int> a, std::span<const Int> b) {
  require_same_length(a, b);
  thread_local mpz_class s;
  s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) mpz_addmul(s.get_mpz_t(), a[i].get_mpz_t(), b[i].get_mpz_t());
  return sgn(s);
}

IntVec add(std::span<const Int> a, std::span<const Int> b) {
  require_same_length(a, b);
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

IntVec sub(std::span<const Int> a, std::span<const Int> b) {
  require_same_length(a, b);
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

IntVec neg(std::span<const Int> a) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

IntVec scale(const Int& c, std::span<const Int> a) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

bool is_zero(std::span<const Int> a) {
  return std::all_of(a.begin(), a.end(), [](const Int& x) { return x == 0; });
}

Int content(std::span<const Int> a) {
  Int g = 0;
  for (const auto& x : a) g = gcd(g, x);
  return g;
}

IntVec primitive(std::span<const Int> a) {
  Int g = content(a);
  IntVec r(a.begin(), a.end());
  if (g > 1)
    for (auto& x : r) x /= g;
  return r;
}

IntVec primitive(std::span<const Rat> a) {
  Int den = 1;
  for (const auto& x : a) den = lcm(den, Int(x.get_den()));
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i].get_num() * (den / a[i].get_den());
  return primitive(std::span<const Int>(r));
}

IntVec zero_vector(std::size_t n) { return IntVec(n, Int(0)); }

IntVec unit_vector(std::size_t n, std::size_t i) {
  IntVec v(n, Int(0));
  v[i] = 1;
  return v;
}

std::string format(std::span<const Int> v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i].get_str();
  }
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Int(0)) {}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(std::size_t cols, std::span<const IntVec> rows) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw Error(ErrorKind::DimensionMismatch, "row " + std::to_string(i) + " has wrong length");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(std::size_t rows, std::span<const IntVec> cols) {
  IntMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows)
      throw Error(ErrorKind::DimensionMismatch,
                  "column " + std::to_string(j) + " has wrong length");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

IntVec IntMatrix::row(std::size_t i) const {
  return IntVec(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
}

IntVec IntMatrix::column(std::size_t j) const {
  IntVec c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

std::vector<IntVec> IntMatrix::columns() const {
  std::vector<IntVec> out;
  out.reserve(cols_);
  for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntVec IntMatrix::apply(std::span<const Int> x) const {
  if (x.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "matrix-vector size mismatch");
  IntVec r(rows_, Int(0));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * x[j];
  return r;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

void IntMatrix::swap_columns(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

void IntMatrix::add_row_multiple(std::size_t a, std::size_t b, const Int& c) {
  if (c == 0) return;
  for (std::size_t j = 0; j < cols_; ++j) (*this)(a, j) += c * (*this)(b, j);
}

void IntMatrix::add_column_multiple(std::size_t a, std::size_t b, const Int& c) {
  if (c == 0) return;
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, a) += c * (*this)(i, b);
}

void IntMatrix::negate_row(std::size_t a) {
  for (std::size_t j = 0; j < cols_; ++j) (*this)(a, j) = -(*this)(a, j);
}

void IntMatrix::negate_column(std::size_t a) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, a) = -(*this)(i, a);
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorKind::DimensionMismatch, "matrix product size mismatch");
  IntMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Int& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

// ---------------------------------------------------------------------------

namespace {

// Replaces columns (c, j) of both matrices by a unimodular combination so that
// h(i, j) becomes zero and h(i, c) becomes gcd(h(i, c), h(i, j)).
void combine_columns(IntMatrix& h, IntMatrix& u, std::size_t i, std::size_t c, std::size_t j) {
  Int a = h(i, c), b = h(i, j);
  Int g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  Int bg = b / g, ag = a / g;
  auto mix = [&](IntMatrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
      Int x = m(r, c), y = m(r, j);
      m(r, c) = s * x + t * y;
      m(r, j) = ag * y - bg * x;
    }
  };
  mix(h);
  mix(u);
}

}  // namespace

HermiteForm hnf(const IntMatrix& a) {
  HermiteForm out{a, IntMatrix::identity(a.cols()), 0};
  IntMatrix& h = out.H;
  IntMatrix& u = out.U;
  std::size_t c = 0;
  for (std::size_t i = 0; i < h.rows() && c < h.cols(); ++i) {
    for (std::size_t j = c + 1; j < h.cols(); ++j)
      if (h(i, j) != 0) combine_columns(h, u, i, c, j);
    if (h(i, c) == 0) continue;
    if (h(i, c) < 0) {
      h.negate_column(c);
      u.negate_column(c);
    }
    for (std::size_t j = 0; j < c; ++j) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), h(i, j).get_mpz_t(), h(i, c).get_mpz_t());
      if (q != 0) {
        h.add_column_multiple(j, c, -q);
        u.add_column_multiple(j, c, -q);
      }
    }
    ++c;
  }
  out.rank = c;
  return out;
}

SmithForm snf(const IntMatrix& a) {
  SmithForm out{a, IntMatrix::identity(a.rows()), IntMatrix::identity(a.cols())};
  IntMatrix& d = out.D;
  const std::size_t m = d.rows(), n = d.cols();
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    for (;;) {
      // smallest nonzero entry of the trailing block becomes the pivot
      std::size_t bi = m, bj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (d(i, j) != 0 && (bi == m || abs(d(i, j)) < abs(d(bi, bj)))) {
            bi = i;
            bj = j;
          }
      if (bi == m) return out;
      d.swap_rows(t, bi);
      out.U.swap_rows(t, bi);
      d.swap_columns(t, bj);
      out.V.swap_columns(t, bj);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        Int q = d(i, t) / d(t, t);
        d.add_row_multiple(i, t, -q);
        out.U.add_row_multiple(i, t, -q);
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        Int q = d(t, j) / d(t, t);
        d.add_column_multiple(j, t, -q);
        out.V.add_column_multiple(j, t, -q);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == m) break;
      d.add_row_multiple(t, bad, 1);
      out.U.add_row_multiple(t, bad, 1);
    }
    if (d(t, t) < 0) {
      d.negate_row(t);
      out.U.negate_row(t);
    }
  }
  return out;
}

Int determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::DimensionMismatch, "determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

std::size_t rank(const IntMatrix& a) {
  IntMatrix m = a;
  Int prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(r, p);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      for (std::size_t j = c + 1; j < m.cols(); ++j) {
        m(i, j) = m(i, j) * m(r, c) - m(i, c) * m(r, j);
        mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
      }
      m(i, c) = 0;
    }
    prev = m(r, c);
    ++r;
  }
  return r;
}

namespace {

// Forward substitution against a column echelon matrix (pivot of column c is
// its first nonzero entry, pivots strictly descend).
std::optional<IntVec> solve_echelon(const IntMatrix& h, std::size_t rank, std::span<const Int> b) {
  IntVec y(h.cols(), Int(0));
  IntVec residual(b.begin(), b.end());
  for (std::size_t c = 0; c < rank; ++c) {
    std::size_t r = 0;
    while (h(r, c) == 0) ++r;
    Int q, rem;
    mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), residual[r].get_mpz_t(), h(r, c).get_mpz_t());
    if (rem != 0) return std::nullopt;
    y[c] = q;
    if (q != 0)
      for (std::size_t i = r; i < h.rows(); ++i) residual[i] -= q * h(i, c);
  }
  if (!is_zero(residual)) return std::nullopt;
  return y;
}

}  // namespace

std::optional<IntVec> solve_integer(const IntMatrix& a, std::span<const Int> b) {
  if (b.size() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "right-hand side has wrong length");
  HermiteForm f = hnf(a);
  auto y = solve_echelon(f.H, f.rank, b);
  if (!y) return std::nullopt;
  return f.U.apply(*y);
}

std::optional<RatVec> solve_rational(const IntMatrix& a, std::span<const Int> b) {
  if (b.size() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "right-hand side has wrong length");
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<RatVec> rows(m, RatVec(n + 1));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = a(i, j);
    rows[i][n] = b[i];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && rows[p][c] == 0) ++p;
    if (p == m) continue;
    std::swap(rows[r], rows[p]);
    Rat inv = 1 / rows[r][c];
    for (auto& x : rows[r]) x *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Rat f = rows[i][c];
      for (std::size_t j = c; j <= n; ++j) rows[i][j] -= f * rows[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < m; ++i)
    if (rows[i][n] != 0) return std::nullopt;
  RatVec x(n, Rat(0));
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = rows[i][n];
  return x;
}

// ---------------------------------------------------------------------------

Sublattice Sublattice::from_generators(std::size_t ambient_rank, std::span<const IntVec> gens) {
  Sublattice l;
  l.ambient_ = ambient_rank;
  if (gens.empty()) return l;
  HermiteForm f = hnf(IntMatrix::from_columns(ambient_rank, gens));
  for (std::size_t c = 0; c < f.rank; ++c) l.basis_.push_back(f.H.column(c));
  return l;
}

Sublattice Sublattice::full(std::size_t ambient_rank) {
  Sublattice l;
  l.ambient_ = ambient_rank;
  for (std::size_t i = 0; i < ambient_rank; ++i) l.basis_.push_back(unit_vector(ambient_rank, i));
  return l;
}

Sublattice Sublattice::zero(std::size_t ambient_rank) {
  Sublattice l;
  l.ambient_ = ambient_rank;
  return l;
}

IntMatrix Sublattice::basis_matrix() const { return IntMatrix::from_columns(ambient_, basis_); }

std::optional<IntVec> Sublattice::coordinates(std::span<const Int> v) const {
  if (v.size() != ambient_)
    throw Error(ErrorKind::DimensionMismatch, "vector of length " + std::to_string(v.size()) +
                                                  " in a lattice of ambient rank " +
                                                  std::to_string(ambient_));
  return solve_echelon(basis_matrix(), basis_.size(), v);
}

bool Sublattice::contains(std::span<const Int> v) const { return coordinates(v).has_value(); }

bool Sublattice::contains(const Sublattice& other) const {
  return std::all_of(other.basis_.begin(), other.basis_.end(),
                     [&](const IntVec& b) { return contains(b); });
}

Sublattice kernel_basis(const IntMatrix& a) {
  HermiteForm f = hnf(a);
  std::vector<IntVec> gens;
  for (std::size_t c = f.rank; c < a.cols(); ++c) gens.push_back(f.U.column(c));
  return Sublattice::from_generators(a.cols(), gens);
}

Sublattice saturate(const Sublattice& l) {
  const std::size_t n = l.ambient_rank();
  if (l.rank() == 0) return l;
  Sublattice orth = kernel_basis(l.basis_matrix().transpose());
  return kernel_basis(IntMatrix::from_rows(n, orth.basis()));
}

bool member_lattice(const Sublattice& l, std::span<const Int> v) { return l.contains(v); }

Sublattice intersect(const Sublattice& a, const Sublattice& b) {
  if (a.ambient_rank() != b.ambient_rank())
    throw Error(ErrorKind::DimensionMismatch, "intersecting lattices of different ambient rank");
  const std::size_t n = a.ambient_rank(), ra = a.rank(), rb = b.rank();
  IntMatrix m(n, ra + rb);
  for (std::size_t j = 0; j < ra; ++j)
    for (std::size_t i = 0; i < n; ++i) m(i, j) = a.basis()[j][i];
  for (std::size_t j = 0; j < rb; ++j)
    for (std::size_t i = 0; i < n; ++i) m(i, ra + j) = -b.basis()[j][i];
  Sublattice k = kernel_basis(m);
  std::vector<IntVec> gens;
  IntMatrix ba = a.basis_matrix();
  for (const auto& v : k.basis()) gens.push_back(ba.apply(std::span<const Int>(v).first(ra)));
  return Sublattice::from_generators(n, gens);
}

IntMatrix inclusion_matrix(const Sublattice& sub, const Sublattice& sup) {
  IntMatrix x(sup.rank(), sub.rank());
  for (std::size_t j = 0; j < sub.rank(); ++j) {
    auto c = sup.coordinates(sub.basis()[j]);
    if (!c)
      throw Error(ErrorKind::NotASublattice,
                  "basis vector " + format(sub.basis()[j]) + " is not in the larger lattice",
                  sub.basis()[j]);
    for (std::size_t i = 0; i < sup.rank(); ++i) x(i, j) = (*c)[i];
  }
  return x;
}

std::optional<Int> lattice_index(const Sublattice& sub, const Sublattice& sup) {
  IntMatrix x = inclusion_matrix(sub, sup);
  if (sub.rank() < sup.rank()) return std::nullopt;
  return abs(determinant(x));
}

std::optional<Int> lattice_index_snf(const Sublattice& sub, const Sublattice& sup) {
  IntMatrix x = inclusion_matrix(sub, sup);
  if (sub.rank() < sup.rank()) return std::nullopt;
  SmithForm s = snf(x);
  Int prod = 1;
  for (std::size_t i = 0; i < x.rows(); ++i) prod *= s.D(i, i);
  return prod;
}

Sublattice p_saturation(const Sublattice& sub, const Sublattice& sup, unsigned long p) {
  if (p == 0) return sub;
  IntMatrix x = inclusion_matrix(sub, sup);
  if (sub.rank() != sup.rank())
    throw Error(ErrorKind::InvalidArgument, "p-saturation needs a sublattice of finite index");
  const std::size_t r = x.rows();
  SmithForm s = snf(x);
  // sub = sup.basis * U^{-1} * D * Z^r; strip the p-part of every d_i.
  std::vector<IntVec> gens;
  IntMatrix bsup = sup.basis_matrix();
  for (std::size_t i = 0; i < r; ++i) {
    Int d = s.D(i, i);
    while (d != 0 && d % p == 0) d /= p;
    auto col = solve_integer(s.U, unit_vector(r, i));
    assert(col);
    gens.push_back(bsup.apply(scale(d, *col)));
  }
  return Sublattice::from_generators(sub.ambient_rank(), gens);
}

std::vector<IntVec> coset_representatives(const Sublattice& sub, const Sublattice& sup) {
  IntMatrix x = inclusion_matrix(sub, sup);
  if (sub.rank() != sup.rank())
    throw Error(ErrorKind::InvalidArgument, "coset enumeration needs a sublattice of finite index");
  const std::size_t r = x.rows();
  SmithForm s = snf(x);
  // sup / sub is isomorphic to the sum of Z/d_i via v -> U * coords(v).
  IntMatrix back = sup.basis_matrix() * inverse_unimodular(s.U);
  std::vector<IntVec> out;
  IntVec z(r, Int(0));
  for (;;) {
    out.push_back(back.apply(z));
    std::size_t i = 0;
    while (i < r && z[i] + 1 >= s.D(i, i)) z[i++] = 0;
    if (i == r) break;
    ++z[i];
  }
  return out;
}

IntMatrix inverse_unimodular(const IntMatrix& u) {
  const std::size_t n = u.rows();
  IntMatrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    auto c = solve_integer(u, unit_vector(n, j));
    if (!c) throw Error(ErrorKind::InvalidArgument, "matrix is not unimodular");
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = (*c)[i];
  }
  return inv;
}

bool is_prime(unsigned long p) {
  if (p < 2) return false;
  for (unsigned long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotASublattice: return "NotASublattice";
    case ErrorKind::NotAFace: return "NotAFace";
    case ErrorKind::MissingFace: return "MissingFace";
    case ErrorKind::BadIntersection: return "BadIntersection";
    case ErrorKind::EmptyFan: return "EmptyFan";
    case ErrorKind::ConeNotInFan: return "ConeNotInFan";
    case ErrorKind::NotASubfan: return "NotASubfan";
    case ErrorKind::GenerationFailure: return "GenerationFailure";
    case ErrorKind::CompatibilityFailure: return "CompatibilityFailure";
    case ErrorKind::NotFiniteExtension: return "NotFiniteExtension";
    case ErrorKind::GeneratorExtractionIncomplete: return "GeneratorExtractionIncomplete";
    case ErrorKind::BadLatticeFamily: return "BadLatticeFamily";
    case ErrorKind::NotWeaklyNormal: return "NotWeaklyNormal";
    case ErrorKind::DegreeNotInSupport: return "DegreeNotInSupport";
    case ErrorKind::UnknownFixture: return "UnknownFixture";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace torf
