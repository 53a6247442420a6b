#include "doctest.h"

#include "oracles.hpp"
#include "torf/derham.hpp"

#include <algorithm>
#include <numeric>
#include <random>

using namespace torf;
using oracle::box;
using oracle::v;
using oracle::vs;

namespace {

Cone cone(std::size_t n, std::initializer_list<std::initializer_list<long>> gens) {
  return Cone::from_generators(n, vs(gens));
}

Fan face_fan(const Cone& c) {
  std::vector<Cone> one{c};
  return face_fan_closure(c.ambient_rank(), one);
}

MonoidalComplex from_monoid(const AffineMonoid& s) {
  auto fs = faces(s.cone());
  return complex_from_monoid_subfan(s, fs);
}

MonoidalComplex torus(std::size_t n) {
  std::vector<IntVec> g;
  for (std::size_t i = 0; i < n; ++i) {
    g.push_back(unit_vector(n, i));
    g.push_back(neg(unit_vector(n, i)));
  }
  return full_complex(face_fan(Cone::from_generators(n, g)));
}

MonoidalComplex affine(std::size_t n) {
  std::vector<IntVec> e;
  for (std::size_t i = 0; i < n; ++i) e.push_back(unit_vector(n, i));
  return full_complex(face_fan(Cone::from_generators(n, e)));
}

MonoidalComplex pinch() { return from_monoid(AffineMonoid(2, vs({{2, 0}, {0, 1}, {1, 1}}))); }

MonoidalComplex normal_crossings(std::size_t q, std::size_t d) {
  const std::size_t n = d + 1;
  std::vector<IntVec> e;
  for (std::size_t i = 0; i < n; ++i) e.push_back(unit_vector(n, i));
  AffineMonoid s(n, e);
  std::vector<Cone> sub;
  for (std::size_t i = 0; i < q; ++i) {
    std::vector<IntVec> g;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) g.push_back(e[j]);
    for (auto& t : faces(Cone::from_generators(n, g))) sub.push_back(std::move(t));
  }
  std::sort(sub.begin(), sub.end());
  sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
  return complex_from_monoid_subfan(s, sub);
}

std::vector<Cone> axes() {
  std::vector<Cone> out{Cone::zero(2), cone(2, {{1, 0}}), cone(2, {{0, 1}})};
  return out;
}

// Sign of the permutation sorting xs (bubble sort inversions).
int sort_sign(std::vector<std::size_t> xs) {
  int s = 1;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j + 1 < xs.size() - i; ++j)
      if (xs[j] > xs[j + 1]) {
        std::swap(xs[j], xs[j + 1]);
        s = -s;
      }
  return s;
}

std::vector<std::vector<std::size_t>> subsets(std::size_t d, std::size_t p) {
  std::vector<std::vector<std::size_t>> out;
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != p) continue;
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < d; ++i)
      if (mask >> i & 1) s.push_back(i);
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Matrix of alpha ^ - : wedge^p -> wedge^{p+1}, by e_j ^ e_I = sign * e_{sorted}.
std::vector<std::vector<Rat>> wedge_matrix(const IntVec& alpha, std::size_t p) {
  const std::size_t d = alpha.size();
  auto src = subsets(d, p), dst = subsets(d, p + 1);
  std::vector<std::vector<Rat>> m(dst.size(), std::vector<Rat>(src.size(), Rat(0)));
  for (std::size_t c = 0; c < src.size(); ++c)
    for (std::size_t j = 0; j < d; ++j) {
      if (std::count(src[c].begin(), src[c].end(), j)) continue;
      std::vector<std::size_t> w{j};
      w.insert(w.end(), src[c].begin(), src[c].end());
      int s = sort_sign(w);
      std::sort(w.begin(), w.end());
      auto r = std::find(dst.begin(), dst.end(), w) - dst.begin();
      m[r][c] += Rat(s) * Rat(alpha[j]);
    }
  return m;
}

std::size_t rat_rank(std::vector<std::vector<Rat>> m) {
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[r], m[piv]);
    for (std::size_t i = 0; i < m.size(); ++i)
      if (i != r && m[i][c] != 0) {
        Rat f = m[i][c] / m[r][c];
        for (std::size_t k = 0; k < cols; ++k) m[i][k] -= f * m[r][k];
      }
    ++r;
  }
  return r;
}

std::vector<std::size_t> koszul_oracle(const IntVec& alpha, std::size_t n) {
  const std::size_t d = alpha.size();
  std::vector<std::size_t> h(std::max(n, d) + 1, 0);
  std::vector<std::size_t> rk(d + 1, 0);
  for (std::size_t p = 0; p < d; ++p) rk[p] = rat_rank(wedge_matrix(alpha, p));
  for (std::size_t p = 0; p <= d; ++p)
    h[p] = subsets(d, p).size() - rk[p] - (p > 0 ? rk[p - 1] : 0);
  return h;
}

GradedForm random_form(const FormModule& fm, std::size_t p, long b, std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  GradedForm w{p, {}};
  for (const auto& m : fm.support_in_box(b)) {
    if (rng() % 3) continue;
    RatVec eta(binomial(fm.fiber_space(m).dim(), p));
    for (auto& e : eta) e = coef(rng);
    if (std::any_of(eta.begin(), eta.end(), [](const Rat& r) { return r != 0; }))
      w.terms.emplace(m, eta);
  }
  return w;
}

std::vector<std::size_t> dims(std::initializer_list<std::size_t> xs) { return xs; }

// Transform every cone and monoid by the unimodular matrix u.
MonoidalComplex transform(const MonoidalComplex& x, const IntMatrix& u) {
  std::vector<Cone> cones;
  std::vector<AffineMonoid> ms;
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<IntVec> g;
    for (const auto& r : x.fan()[i].generators()) g.push_back(u.apply(r));
    cones.push_back(Cone::from_generators(x.ambient_rank(), g));
  }
  Fan f = fan_validate(x.ambient_rank(), cones);
  ms.resize(f.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<IntVec> g;
    for (const auto& r : x.monoid(i).generators()) g.push_back(u.apply(r));
    ms[*f.index_of(cones[i])] = AffineMonoid(x.ambient_rank(), g);
  }
  return complex_validate(f, std::move(ms));
}

}  // namespace

TEST_CASE("wedge basis and binomials") {
  CHECK(wedge_basis(3, 2) == std::vector<std::vector<std::size_t>>{{0, 1}, {0, 2}, {1, 2}});
  CHECK(wedge_basis(2, 0).size() == 1);
  CHECK(wedge_basis(2, 3).empty());
  for (std::size_t d = 0; d <= 6; ++d)
    for (std::size_t p = 0; p <= d + 1; ++p) {
      CHECK(wedge_basis(d, p) == subsets(d, p));
      CHECK(binomial(d, p) == subsets(d, p).size());
    }
}

TEST_CASE("fiber spaces") {
  FormModule t(torus(2));
  CHECK(t.fiber_space(v({3, -1})).dim() == 2);
  FormModule a(affine(2));
  CHECK(a.fiber_space(v({1, 0})).dim() == 1);
  CHECK(a.fiber_space(v({0, 0})).dim() == 0);
  CHECK(a.fiber_space(v({2, 5})).dim() == 2);
  CHECK_THROWS_AS(a.fiber_space(v({-1, 0})), Error);

  FormModule p(pinch());
  auto fs = p.fiber_space(v({4, 0}));
  CHECK(fs.basis == vs({{2, 0}}));
  CHECK(p.alpha(v({4, 0})) == v({2}));

  // A^0 is one-dimensional on every support degree
  for (const auto& m : p.support_in_box(3)) CHECK(binomial(p.fiber_space(m).dim(), 0) == 1);
}

TEST_CASE("forms need weak normality") {
  auto two_three = from_monoid(AffineMonoid(1, vs({{2}, {3}})));
  try {
    FormModule fm(two_three);
    FAIL("accepted a non-seminormal complex");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotWeaklyNormal);
  }
  CHECK_NOTHROW(FormModule(pinch()));
}

TEST_CASE("differential squares to zero and obeys Leibniz") {
  std::mt19937 rng(11);
  std::vector<MonoidalComplex> xs{torus(2), affine(3), pinch(), normal_crossings(2, 2)};
  for (const auto& x : xs) {
    FormModule fm(x);
    const std::size_t n = x.ambient_rank();
    auto degs = fm.support_in_box(2);
    for (std::size_t p = 0; p <= n; ++p)
      for (int trial = 0; trial < 4; ++trial) {
        GradedForm w = random_form(fm, p, 2, rng);
        CHECK(fm.differential(fm.differential(w)).terms.empty());
        const IntVec& mp = degs[rng() % degs.size()];
        GradedForm lhs = fm.differential(fm.module_action(mp, w));
        GradedForm rhs = fm.add(fm.dlog_action(mp, w), fm.module_action(mp, fm.differential(w)));
        CHECK(lhs == rhs);
        // restriction to any cone commutes with d
        for (const auto& t : x.fan().cones())
          CHECK(fm.restrict(fm.differential(w), t) == fm.differential(fm.restrict(w, t)));
      }
  }
}

TEST_CASE("module action") {
  FormModule a(affine(2));
  // chi^(1,0) * chi^(0,1) dlog: the rank-1 basis vector maps into Z^2
  GradedForm w{1, {{v({0, 1}), RatVec{Rat(1)}}}};
  GradedForm out = a.module_action(v({1, 0}), w);
  REQUIRE(out.terms.size() == 1);
  CHECK(out.terms.begin()->first == v({1, 1}));
  CHECK(out.terms.begin()->second == RatVec{Rat(0), Rat(1)});

  // on the axes cross the two rays do not multiply
  std::vector<Cone> rays{cone(2, {{1, 0}}), cone(2, {{0, 1}})};
  auto cross = full_complex(face_fan_closure(2, rays));
  FormModule c(cross);
  GradedForm f{0, {{v({0, 2}), RatVec{Rat(5)}}}};
  CHECK(c.module_action(v({1, 0}), f).terms.empty());
  CHECK(c.module_action(v({0, 1}), f).terms.at(v({0, 3})) == RatVec{Rat(5)});

  FormModule t(torus(1));
  CHECK_THROWS_AS(a.restrict(w, cone(2, {{1, 1}})), Error);
  CHECK(a.restrict(w, cone(2, {{0, 1}})) == w);
  CHECK(a.restrict(w, cone(2, {{1, 0}})).terms.empty());
}

TEST_CASE("fiber complexes are Koszul") {
  std::vector<MonoidalComplex> xs{torus(3), affine(3), pinch(), normal_crossings(3, 2)};
  for (const auto& x : xs) {
    FormModule fm(x);
    for (const auto& m : fm.support_in_box(2)) {
      auto fc = fm.fiber_complex(m);
      auto h = fiber_cohomology(fc, x.ambient_rank());
      CHECK(h == koszul_oracle(fm.alpha(m), x.ambient_rank()));
      if (std::any_of(m.begin(), m.end(), [](const Int& e) { return e != 0; })) {
        CHECK(std::accumulate(h.begin(), h.end(), std::size_t{0}) == 0);
      } else {
        for (std::size_t p = 0; p <= fc.dim; ++p) CHECK(h[p] == binomial(fc.dim, p));
      }
      // composite of consecutive maps vanishes
      for (std::size_t p = 0; p + 1 < fc.maps.size(); ++p) {
        IntMatrix c = fc.maps[p + 1] * fc.maps[p];
        for (std::size_t i = 0; i < c.rows(); ++i)
          for (std::size_t j = 0; j < c.cols(); ++j) CHECK(c(i, j) == 0);
      }
    }
  }
}

TEST_CASE("betti numbers") {
  CHECK(FormModule(torus(1)).betti({}).dims == dims({1, 1}));
  CHECK(FormModule(torus(2)).betti({}).dims == dims({1, 2, 1}));
  CHECK(FormModule(torus(3)).betti({}).dims == dims({1, 3, 3, 1}));
  CHECK(FormModule(affine(3)).betti({}).dims == dims({1, 0, 0, 0}));
  CHECK(FormModule(normal_crossings(2, 2)).betti({}).dims == dims({1, 0, 0, 0}));
  CHECK(FormModule(pinch()).betti({}).dims == dims({1, 0, 0}));

  auto y = axes();
  CHECK(FormModule(affine(2)).betti({}, y).dims == dims({0, 0, 0}));

  // theoretical and box modes agree, in any thread count
  std::vector<MonoidalComplex> xs{torus(2), affine(2), pinch(), normal_crossings(1, 1)};
  for (const auto& x : xs) {
    FormModule fm(x);
    auto th = fm.betti({});
    CHECK(fm.betti(4).dims == th.dims);
    CHECK(fm.betti(4, {}, 3).dims == th.dims);
    CHECK(fm.betti(4).box == 4);
    CHECK(!th.box);
  }
  FormModule a(affine(2));
  CHECK(a.betti(4, y, 2).dims == dims({0, 0, 0}));
}

TEST_CASE("relative forms split along the pair") {
  FormModule x(affine(2));
  auto y = axes();
  FormModule ym(subcomplex(x.complex(), y));
  PairFilter keep(x.complex(), y);
  for (const auto& m : box(2, 5)) {
    if (!x.complex().in_support(m)) continue;
    for (std::size_t p = 0; p <= 2; ++p) {
      std::size_t whole = binomial(x.fiber_space(m).dim(), p);
      std::size_t rel = keep(m) ? whole : 0;
      std::size_t on_y = ym.complex().in_support(m) ? binomial(ym.fiber_space(m).dim(), p) : 0;
      CHECK(whole == rel + on_y);
    }
  }
  auto f = pair_degree_filter(x.complex(), y);
  CHECK(!f(v({3, 0})));
  CHECK(f(v({3, 1})));
  CHECK(!f(v({-1, 1})));
}

TEST_CASE("relative fibers decompose over open cones") {
  std::vector<std::pair<MonoidalComplex, std::vector<Cone>>> cases;
  cases.emplace_back(affine(2), axes());
  cases.emplace_back(affine(2), std::vector<Cone>{});
  cases.emplace_back(pinch(), std::vector<Cone>{Cone::zero(2), cone(2, {{1, 0}})});
  cases.emplace_back(normal_crossings(2, 2), std::vector<Cone>{Cone::zero(3)});
  for (const auto& [x, y] : cases) {
    FormModule fm(x);
    PairFilter keep(x, y);
    for (std::size_t p = 0; p <= x.ambient_rank(); ++p) {
      auto rows = fm.pair_dims(y, p, 3);
      CHECK(rows.size() == fm.support_in_box(3).size());
      for (const auto& r : rows) {
        CHECK(r.lhs == r.rhs);
        // independent count: rank of the lattice generated by the degree's cone monoid
        std::size_t expect = 0;
        if (keep(r.degree)) {
          auto i = *x.locate(r.degree);
          expect = binomial(Sublattice::from_generators(x.ambient_rank(), x.monoid(i).generators()).rank(), p);
        }
        CHECK(r.lhs == expect);
      }
    }
  }
}

TEST_CASE("forms on the weak normalization of any complex") {
  auto two_three = from_monoid(AffineMonoid(1, vs({{2}, {3}})));
  auto rows = hdiff_general(two_three, 1, 4);
  auto one = std::find_if(rows.begin(), rows.end(), [](const DegreeDim& r) { return r.degree == v({1}); });
  REQUIRE(one != rows.end());
  CHECK(one->dim == 1);
  CHECK(rows.size() == 5);  // 0..4

  auto pr = hdiff_general(pinch(), 1, 3);
  CHECK(std::none_of(pr.begin(), pr.end(), [](const DegreeDim& r) { return r.degree == v({1, 0}); }));
  auto zero = std::find_if(pr.begin(), pr.end(), [](const DegreeDim& r) { return r.degree == v({0, 0}); });
  REQUIRE(zero != pr.end());
  CHECK(zero->dim == 0);
  auto two = std::find_if(pr.begin(), pr.end(), [](const DegreeDim& r) { return r.degree == v({2, 0}); });
  REQUIRE(two != pr.end());
  CHECK(two->dim == 1);
}

TEST_CASE("betti numbers are invariant under unimodular change of basis") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> e(-2, 2);
  std::vector<MonoidalComplex> xs{torus(2), affine(2), pinch()};
  for (const auto& x : xs) {
    for (int trial = 0; trial < 3; ++trial) {
      // product of random elementary matrices
      IntMatrix u = IntMatrix::identity(2);
      for (int k = 0; k < 4; ++k) {
        IntMatrix el = IntMatrix::identity(2);
        el(k % 2, 1 - k % 2) = e(rng);
        u = el * u;
      }
      auto y = transform(x, u);
      FormModule a(x), b(y);
      CHECK(a.betti({}).dims == b.betti({}).dims);
      CHECK(a.betti(3).dims == b.betti(3).dims);
      CHECK(a.support_in_box(0).size() == b.support_in_box(0).size());
    }
  }
}
