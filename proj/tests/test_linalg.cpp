#include "doctest.h"

#include "torf/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <random>

using namespace torf;

namespace {

IntVec v(std::initializer_list<long> xs) {
  IntVec out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

IntMatrix m(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<IntVec> r;
  for (auto row : rows) r.push_back(v(row));
  return IntMatrix::from_rows(r.empty() ? 0 : r[0].size(), r);
}

// Leibniz expansion; independent of the Bareiss code path.
Int brute_det(const IntMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Int total = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Int term = inversions % 2 ? -1 : 1;
    for (std::size_t i = 0; i < n; ++i) term *= a(i, perm[i]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// gcd of all k x k minors (determinantal divisor), by enumeration.
Int determinantal_divisor(const IntMatrix& a, std::size_t k) {
  Int g = 0;
  std::vector<bool> rsel(a.rows(), false), csel(a.cols(), false);
  std::fill(rsel.end() - k, rsel.end(), true);
  do {
    std::fill(csel.begin(), csel.end(), false);
    std::fill(csel.end() - k, csel.end(), true);
    do {
      IntMatrix sub(k, k);
      std::size_t r = 0;
      for (std::size_t i = 0; i < a.rows(); ++i) {
        if (!rsel[i]) continue;
        std::size_t c = 0;
        for (std::size_t j = 0; j < a.cols(); ++j)
          if (csel[j]) sub(r, c++) = a(i, j);
        ++r;
      }
      g = gcd(g, brute_det(sub));
    } while (std::next_permutation(csel.begin(), csel.end()));
  } while (std::next_permutation(rsel.begin(), rsel.end()));
  return g;
}

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, long lo, long hi) {
  std::uniform_int_distribution<long> d(lo, hi);
  IntMatrix a(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) a(i, j) = d(rng);
  return a;
}

bool is_column_hnf(const IntMatrix& h, std::size_t rank) {
  std::size_t prev_row = 0;
  for (std::size_t c = 0; c < h.cols(); ++c) {
    std::size_t r = 0;
    while (r < h.rows() && h(r, c) == 0) ++r;
    if (c >= rank) {
      if (r != h.rows()) return false;
      continue;
    }
    if (r == h.rows() || h(r, c) <= 0) return false;
    if (c > 0 && r <= prev_row) return false;
    for (std::size_t j = 0; j < c; ++j)
      if (h(r, j) < 0 || h(r, j) >= h(r, c)) return false;
    prev_row = r;
  }
  return true;
}

}  // namespace

TEST_CASE("hnf examples") {
  auto id = hnf(IntMatrix::identity(2));
  CHECK(id.H == IntMatrix::identity(2));
  CHECK(id.U == IntMatrix::identity(2));

  auto a = m({{2, 4}, {0, 3}});
  auto f = hnf(a);
  CHECK(a * f.U == f.H);
  CHECK(abs(brute_det(f.U)) == 1);
  CHECK(f.H == m({{2, 0}, {0, 3}}));

  auto z = hnf(IntMatrix(2, 3));
  CHECK(z.H == IntMatrix(2, 3));
  CHECK(z.U == IntMatrix::identity(3));
  CHECK(z.rank == 0);
}

TEST_CASE("snf examples") {
  auto s = snf(m({{2, 0}, {0, 3}}));
  CHECK(s.D == m({{1, 0}, {0, 6}}));
  CHECK(snf(IntMatrix::identity(3)).D == IntMatrix::identity(3));
  CHECK(snf(m({{0, 0}})).D == m({{0, 0}}));
}

TEST_CASE("normal forms on random matrices") {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t r = 1 + trial % 3, c = 1 + (trial / 3) % 4;
    IntMatrix a = random_matrix(rng, r, c, -6, 6);

    auto h = hnf(a);
    CHECK(a * h.U == h.H);
    CHECK(abs(brute_det(h.U)) == 1);
    CHECK(is_column_hnf(h.H, h.rank));
    CHECK(h.rank == rank(a));

    auto s = snf(a);
    CHECK(s.U * a * s.V == s.D);
    CHECK(abs(brute_det(s.U)) == 1);
    CHECK(abs(brute_det(s.V)) == 1);
    Int prev_divisor = 1;
    for (std::size_t i = 0; i < std::min(r, c); ++i) {
      for (std::size_t j = 0; j < c; ++j)
        if (j != i) CHECK(s.D(i, j) == 0);
      CHECK(s.D(i, i) >= 0);
      if (i + 1 < std::min(r, c) && s.D(i, i) != 0) CHECK(s.D(i + 1, i + 1) % s.D(i, i) == 0);
      // d_1 * ... * d_k equals the k-th determinantal divisor
      Int dk = determinantal_divisor(a, i + 1);
      Int prod = prev_divisor * s.D(i, i);
      CHECK(prod == dk);
      prev_divisor = prod;
    }
  }
}

TEST_CASE("determinant matches expansion") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 1 + trial % 4;
    IntMatrix a = random_matrix(rng, n, n, -9, 9);
    CHECK(determinant(a) == brute_det(a));
  }
}

TEST_CASE("kernel basis") {
  // enumerate small solutions of x + y = 0
  auto k = kernel_basis(m({{1, 1}}));
  REQUIRE(k.rank() == 1);
  CHECK((k.basis()[0] == v({1, -1}) || k.basis()[0] == v({-1, 1})));
  CHECK(kernel_basis(IntMatrix::identity(3)).rank() == 0);
  auto k2 = kernel_basis(m({{2, 4}}));
  REQUIRE(k2.rank() == 1);
  CHECK(content(k2.basis()[0]) == 1);
  CHECK((k2.basis()[0] == v({2, -1}) || k2.basis()[0] == v({-2, 1})));

  std::mt19937 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    IntMatrix a = random_matrix(rng, 1 + trial % 3, 3 + trial % 2, -4, 4);
    auto kb = kernel_basis(a);
    CHECK(kb.rank() + rank(a) == a.cols());
    for (const auto& x : kb.basis()) {
      CHECK(is_zero(a.apply(x)));
      CHECK(content(x) == 1);
    }
    // every small integer solution lies in the kernel lattice
    std::vector<long> box{-2, -1, 0, 1, 2};
    IntVec x(a.cols());
    std::size_t total = 1;
    for (std::size_t i = 0; i < a.cols(); ++i) total *= box.size();
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t c = code;
      for (std::size_t i = 0; i < a.cols(); ++i) {
        x[i] = box[c % box.size()];
        c /= box.size();
      }
      if (is_zero(a.apply(x))) CHECK(kb.contains(x));
    }
  }
}

TEST_CASE("lattice index") {
  const auto z2 = Sublattice::full(2);
  std::vector<IntVec> g{v({2, 0}), v({0, 3})};
  const auto l23 = Sublattice::from_generators(2, g);
  CHECK(lattice_index(l23, z2) == Int(6));
  CHECK(lattice_index_snf(l23, z2) == Int(6));
  CHECK(lattice_index(z2, z2) == Int(1));
  std::vector<IntVec> x{v({1, 0})};
  CHECK_FALSE(lattice_index(Sublattice::from_generators(2, x), z2).has_value());
  CHECK_THROWS_AS(lattice_index(z2, l23), Error);
  try {
    lattice_index(z2, l23);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotASublattice);
  }

  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    IntMatrix a = random_matrix(rng, 3, 3, -5, 5);
    auto sub = Sublattice::from_generators(3, a.columns());
    auto i1 = lattice_index(sub, Sublattice::full(3));
    auto i2 = lattice_index_snf(sub, Sublattice::full(3));
    CHECK(i1 == i2);
    if (i1) CHECK(*i1 == abs(brute_det(a)));
  }
}

TEST_CASE("saturate and membership") {
  std::vector<IntVec> g{v({2, 0})};
  auto s = saturate(Sublattice::from_generators(2, g));
  std::vector<IntVec> e{v({1, 0})};
  CHECK(s == Sublattice::from_generators(2, e));
  CHECK(saturate(s) == s);
  std::vector<IntVec> g2{v({2, 2})};
  std::vector<IntVec> e2{v({1, 1})};
  CHECK(saturate(Sublattice::from_generators(2, g2)) == Sublattice::from_generators(2, e2));

  std::vector<IntVec> g23{v({2, 0}), v({0, 3})};
  auto l = Sublattice::from_generators(2, g23);
  CHECK(member_lattice(l, v({2, 0})));
  CHECK_FALSE(member_lattice(l, v({1, 0})));
  CHECK(member_lattice(l, v({2, 3})));
  CHECK_THROWS_AS(member_lattice(l, v({1, 2, 3})), Error);

  std::mt19937 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    IntMatrix a = random_matrix(rng, 4, 2, -6, 6);
    auto lat = Sublattice::from_generators(4, a.columns());
    auto sat = saturate(lat);
    CHECK(sat.rank() == lat.rank());
    CHECK(sat.contains(lat));
    CHECK(saturate(sat) == sat);
  }
}

TEST_CASE("p-saturation") {
  std::vector<IntVec> six{v({6})};
  auto l = Sublattice::from_generators(1, six);
  auto full = Sublattice::full(1);
  std::vector<IntVec> three{v({3})}, two{v({2})};
  CHECK(p_saturation(l, full, 2) == Sublattice::from_generators(1, three));
  CHECK(p_saturation(l, full, 3) == Sublattice::from_generators(1, two));
  CHECK(p_saturation(l, full, 5) == l);
  CHECK(p_saturation(l, full, 0) == l);
}

TEST_CASE("intersection of sublattices") {
  std::vector<IntVec> a{v({2, 0}), v({0, 1})}, b{v({3, 0}), v({0, 2})};
  auto c = intersect(Sublattice::from_generators(2, a), Sublattice::from_generators(2, b));
  std::vector<IntVec> e{v({6, 0}), v({0, 2})};
  CHECK(c == Sublattice::from_generators(2, e));
}
