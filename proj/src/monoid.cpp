#include "torf/monoid.hpp"

#include <algorithm>
#include <memory>
#include <set>

namespace torf {

namespace {

template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    if (!f(std::span<const std::size_t>(idx))) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

Int floor_div(const Rat& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Int ceil_div(const Rat& q) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

// Coordinates adapted to a cone c and a lattice lat of full rank in its span:
// lat = lin + lift(Z^k), where lin = lat cap (lineality space) and the image
// of c in lat / lin = Z^k is the pointed, full-dimensional cone `quotient`.
struct Frame {
  std::size_t n = 0, k = 0;
  Sublattice lat;
  Sublattice lin;
  IntMatrix lift;      // n x k
  IntMatrix to_quot;   // k x rank(lat), acting on lat-coordinates
  Cone quotient;
  IntVec grading;      // degree on Z^k pulled back along lift

  Frame(const Cone& c, const Sublattice& lattice) : n(c.ambient_rank()), lat(lattice) {
    const std::size_t r = lat.rank();
    if (r != c.dim())
      throw Error(ErrorKind::InvalidArgument, "lattice rank differs from the cone dimension");
    for (const auto& b : lat.basis())
      if (!c.span().contains(b))
        throw Error(ErrorKind::InvalidArgument, "lattice vector " + format(b) + " leaves the span",
                    b);
    IntMatrix b = lat.basis_matrix();
    auto rational_coords = [&](const IntVec& v) {
      auto x = solve_rational(b, v);
      return primitive(std::span<const Rat>(*x));
    };
    std::vector<IntVec> cg;
    for (const auto& g : c.generators()) cg.push_back(rational_coords(g));
    Cone inner = Cone::from_generators(r, cg);

    const auto& kb = inner.lineality().basis();
    const std::size_t l = kb.size();
    k = r - l;
    IntMatrix u = IntMatrix::identity(r);
    if (l > 0) u = snf(IntMatrix::from_columns(r, kb)).U;
    IntMatrix uinv = inverse_unimodular(u);

    std::vector<IntVec> lin_gens;
    for (std::size_t j = 0; j < l; ++j) lin_gens.push_back(b.apply(uinv.column(j)));
    lin = Sublattice::from_generators(n, lin_gens);

    lift = IntMatrix(n, k);
    to_quot = IntMatrix(k, r);
    for (std::size_t j = 0; j < k; ++j) {
      IntVec col = b.apply(uinv.column(l + j));
      for (std::size_t i = 0; i < n; ++i) lift(i, j) = col[i];
      for (std::size_t i = 0; i < r; ++i) to_quot(j, i) = u(l + j, i);
    }
    std::vector<IntVec> qg;
    for (const auto& g : inner.rays()) qg.push_back(to_quot.apply(g));
    quotient = Cone::from_generators(k, qg);
    grading = lift.transpose().apply(c.grading());
  }

  IntVec project(std::span<const Int> x) const { return to_quot.apply(*lat.coordinates(x)); }
};

// Irreducible elements of Z^k cap c for a pointed full-dimensional cone c.
// Every lattice point of c lies in a simplicial cone spanned by k rays, so it
// is a lattice point of that cone's half-open parallelepiped plus a
// nonnegative combination of the rays.
std::vector<IntVec> hilbert_basis_pointed(const Cone& c) {
  const std::size_t k = c.ambient_rank();
  const auto& rays = c.rays();
  std::set<IntVec> cand(rays.begin(), rays.end());
  for_each_subset(rays.size(), k, [&](std::span<const std::size_t> subset) {
    std::vector<IntVec> cols;
    for (auto i : subset) cols.push_back(rays[i]);
    IntMatrix r = IntMatrix::from_columns(k, cols);
    if (determinant(r) == 0) return true;
    auto reps = coset_representatives(Sublattice::from_generators(k, cols), Sublattice::full(k));
    for (const auto& x0 : reps) {
      auto lam = *solve_rational(r, x0);
      RatVec x(k, Rat(0));
      for (std::size_t j = 0; j < k; ++j) {
        Rat frac = lam[j] - Rat(floor_div(lam[j]));
        for (std::size_t i = 0; i < k; ++i) x[i] += frac * Rat(cols[j][i]);
      }
      IntVec xi(k);
      bool nonzero = false;
      for (std::size_t i = 0; i < k; ++i) {
        xi[i] = x[i].get_num();
        nonzero |= xi[i] != 0;
      }
      if (nonzero) cand.insert(std::move(xi));
    }
    return true;
  });
  std::vector<IntVec> out;
  for (const auto& g : cand) {
    bool reducible = false;
    for (const auto& h : cand)
      if (h != g && c.contains(sub(g, h))) {
        reducible = true;
        break;
      }
    if (!reducible) out.push_back(g);
  }
  return out;
}

// All z in the pointed cone of the frame with grading(z) <= bound, ordered by
// degree then lexicographically.
std::vector<IntVec> quotient_points(const Frame& f, const Int& bound) {
  const std::size_t k = f.k;
  std::vector<Int> lo(k, Int(0)), hi(k, Int(0));
  for (const auto& r : f.quotient.rays()) {
    Int d = dot(f.grading, r);
    for (std::size_t i = 0; i < k; ++i) {
      Rat v(Int(r[i] * bound), d);
      v.canonicalize();
      lo[i] = std::min(lo[i], floor_div(v));
      hi[i] = std::max(hi[i], ceil_div(v));
    }
  }
  std::vector<std::pair<Int, IntVec>> pts;
  IntVec z = lo;
  for (;;) {
    if (f.quotient.contains(z)) {
      Int d = dot(f.grading, z);
      if (d <= bound) pts.emplace_back(d, z);
    }
    std::size_t i = 0;
    while (i < k && z[i] == hi[i]) {
      z[i] = lo[i];
      ++i;
    }
    if (i == k) break;
    ++z[i];
  }
  std::sort(pts.begin(), pts.end());
  std::vector<IntVec> out;
  for (auto& p : pts) out.push_back(std::move(p.second));
  return out;
}

std::vector<IntVec> plus_minus(const Sublattice& l) {
  std::vector<IntVec> out;
  for (const auto& b : l.basis()) {
    out.push_back(b);
    out.push_back(neg(b));
  }
  return out;
}

// Greedy extraction of generators of the set {x in sigma : pred(x)}, which is
// assumed to be a monoid whose part on the lineality space is lin_group and
// which is stable under adding lin_group.
AffineMonoid extract_generators(const Cone& sigma, const Sublattice& lin_group,
                                const std::function<bool(std::span<const Int>)>& pred,
                                const Int& degree_bound, long box) {
  const std::size_t n = sigma.ambient_rank();
  Frame f(sigma, sigma.span());
  std::vector<IntVec> gens = plus_minus(lin_group);
  auto reps = coset_representatives(lin_group, f.lin);

  AffineMonoid current(n, gens);
  auto tester = std::make_unique<MembershipTester>(current);
  for (const auto& z : quotient_points(f, degree_bound)) {
    if (is_zero(z)) continue;
    IntVec base = f.lift.apply(z);
    for (const auto& c : reps) {
      IntVec x = add(base, c);
      if (!pred(x) || (*tester)(x)) continue;
      gens.push_back(std::move(x));
      current = AffineMonoid(n, gens);
      tester = std::make_unique<MembershipTester>(current);
    }
  }

  for_each_box_point(n, box, [&](const IntVec& x) {
    if (!sigma.contains(x) || !pred(x) || (*tester)(x)) return;
    throw Error(ErrorKind::GeneratorExtractionIncomplete,
                "degree bound " + degree_bound.get_str() + " misses " + format(x), x);
  });
  return current;
}

// Twice the largest degree of a Hilbert basis element of some lattice over
// its face.
Int default_degree_bound(const Cone& sigma, std::span<const Cone> faces,
                         std::span<const Sublattice> lattices) {
  const IntVec ell = sigma.grading();
  Int best = 1;
  for (std::size_t i = 0; i < faces.size(); ++i)
    for (const auto& h : saturated_generators(faces[i], lattices[i]))
      best = std::max(best, Int(dot(ell, h)));
  return 2 * best;
}

std::vector<Sublattice> face_groups(const AffineMonoid& s, const std::vector<Cone>& fs) {
  std::vector<Sublattice> out;
  for (const auto& t : fs) out.push_back(face_restriction(s, t).group());
  return out;
}

}  // namespace

void check_characteristic(unsigned long p) {
  if (p != 0 && !is_prime(p))
    throw Error(ErrorKind::InvalidArgument,
                "characteristic must be 0 or a prime, got " + std::to_string(p));
}

// ---------------------------------------------------------------------------

AffineMonoid::AffineMonoid(std::size_t ambient_rank, std::span<const IntVec> gens)
    : ambient_(ambient_rank) {
  for (const auto& g : gens) {
    if (g.size() != ambient_rank)
      throw Error(ErrorKind::DimensionMismatch, "generator " + format(g) + " has wrong length");
    if (!is_zero(g)) gens_.push_back(g);
  }
  std::sort(gens_.begin(), gens_.end());
  gens_.erase(std::unique(gens_.begin(), gens_.end()), gens_.end());
  cone_ = Cone::from_generators(ambient_rank, gens_);
  group_ = Sublattice::from_generators(ambient_rank, gens_);
  grading_ = cone_.grading();
  std::vector<IntVec> lin;
  for (const auto& g : gens_) (dot(grading_, g) == 0 ? lin : pointed_).push_back(g);
  lin_group_ = Sublattice::from_generators(ambient_rank, lin);
  std::stable_sort(pointed_.begin(), pointed_.end(), [&](const IntVec& a, const IntVec& b) {
    return dot(grading_, a) > dot(grading_, b);
  });
}

bool AffineMonoid::contains(std::span<const Int> m) const {
  MembershipTester t(*this);
  return t(m);
}

// Depth-first search over representations m = sum of pointed generators with
// nondecreasing index plus an element of the lineality group.  The degree
// strictly drops along every branch, and residues must stay in the cone.
bool MembershipTester::operator()(std::span<const Int> m) {
  const AffineMonoid& s = *s_;
  if (m.size() != s.ambient_)
    throw Error(ErrorKind::DimensionMismatch, "vector " + format(m) + " has wrong length");
  if (!s.cone_.contains(m) || !s.group_.contains(m)) return false;
  if (dot(s.grading_, m) == 0) return s.lin_group_.contains(m);

  struct Frame {
    IntVec r;
    std::size_t start, next;
  };
  const auto& g = s.pointed_;
  auto known_fail = [&](const IntVec& r, std::size_t start) {
    auto it = failed_.find(r);
    return it != failed_.end() && it->second <= start;
  };
  IntVec root(m.begin(), m.end());
  if (known_fail(root, 0)) return false;
  std::vector<Frame> stack;
  stack.push_back({std::move(root), 0, 0});
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next == g.size()) {
      auto [it, fresh] = failed_.emplace(std::move(f.r), f.start);
      if (!fresh) it->second = std::min(it->second, f.start);
      stack.pop_back();
      continue;
    }
    const std::size_t i = f.next++;
    IntVec r = sub(f.r, g[i]);
    if (!s.cone_.contains(r)) continue;
    if (dot(s.grading_, r) == 0) {
      if (s.lin_group_.contains(r)) return true;
      continue;
    }
    if (known_fail(r, i)) continue;
    stack.push_back({std::move(r), i, i});
  }
  return false;
}

Sublattice monoid_gp(const AffineMonoid& s) { return s.group(); }
Cone monoid_cone(const AffineMonoid& s) { return s.cone(); }
bool member(const AffineMonoid& s, std::span<const Int> m) { return s.contains(m); }

AffineMonoid face_restriction(const AffineMonoid& s, const Cone& t) {
  if (!is_face_of(t, s.cone()))
    throw Error(ErrorKind::NotAFace, t.to_string() + " is not a face of " + s.cone().to_string());
  std::vector<IntVec> g;
  for (const auto& v : s.generators())
    if (t.contains(v)) g.push_back(v);
  return AffineMonoid(s.ambient_rank(), g);
}

std::vector<IntVec> saturated_generators(const Cone& c, const Sublattice& lat) {
  Frame f(c, lat);
  std::vector<IntVec> out;
  for (const auto& h : hilbert_basis_pointed(f.quotient)) out.push_back(f.lift.apply(h));
  for (auto& v : plus_minus(f.lin)) out.push_back(std::move(v));
  return out;
}

AffineMonoid saturation(const AffineMonoid& s) {
  return AffineMonoid(s.ambient_rank(), saturated_generators(s.cone(), s.cone().span()));
}

// ---------------------------------------------------------------------------

StratifiedMonoid::StratifiedMonoid(Cone cone, std::vector<Sublattice> lattices)
    : cone_(std::move(cone)), faces_(torf::faces(cone_)), lattices_(std::move(lattices)) {
  if (lattices_.size() != faces_.size())
    throw Error(ErrorKind::BadLatticeFamily, "expected one lattice per face");
  for (std::size_t i = 0; i < faces_.size(); ++i) {
    const auto& t = faces_[i];
    const auto& l = lattices_[i];
    if (l.ambient_rank() != cone_.ambient_rank())
      throw Error(ErrorKind::DimensionMismatch, "lattice has the wrong ambient rank");
    for (const auto& b : l.basis())
      if (!t.span().contains(b))
        throw Error(ErrorKind::BadLatticeFamily,
                    "lattice over " + t.to_string() + " leaves the span of the face", b);
    if (l.rank() != t.dim())
      throw Error(ErrorKind::BadLatticeFamily,
                  "lattice over " + t.to_string() + " does not have finite index", t.relint_point());
  }
  for (std::size_t i = 0; i < faces_.size(); ++i)
    for (std::size_t j = 0; j < faces_.size(); ++j) {
      if (i == j || !faces_[j].contains(faces_[i])) continue;
      for (const auto& b : lattices_[i].basis())
        if (!lattices_[j].contains(b))
          throw Error(ErrorKind::BadLatticeFamily,
                      "lattice over " + faces_[i].to_string() + " is not contained in the one over " +
                          faces_[j].to_string(),
                      b);
    }
}

const Sublattice& StratifiedMonoid::lattice(const Cone& face) const {
  auto it = std::lower_bound(faces_.begin(), faces_.end(), face);
  if (it == faces_.end() || !(*it == face))
    throw Error(ErrorKind::NotAFace, face.to_string() + " is not a face of " + cone_.to_string());
  return lattices_[static_cast<std::size_t>(it - faces_.begin())];
}

std::optional<std::size_t> StratifiedMonoid::locate(std::span<const Int> m) const {
  if (!cone_.contains(m)) return std::nullopt;
  for (std::size_t i = 0; i < faces_.size(); ++i)
    if (faces_[i].relint_contains(m)) return i;
  throw Error(ErrorKind::Internal, "no face contains " + format(m) + " in its relative interior");
}

bool StratifiedMonoid::contains(std::span<const Int> m) const {
  auto i = locate(m);
  return i && lattices_[*i].contains(m);
}

StratifiedMonoid stratify(const AffineMonoid& s) {
  auto fs = faces(s.cone());
  return StratifiedMonoid(s.cone(), face_groups(s, fs));
}

StratifiedMonoid seminormalization(const AffineMonoid& s) { return stratify(s); }

StratifiedMonoid weak_normalization(const AffineMonoid& s, unsigned long p) {
  check_characteristic(p);
  auto fs = faces(s.cone());
  auto ls = face_groups(s, fs);
  for (std::size_t i = 0; i < fs.size(); ++i) ls[i] = p_saturation(ls[i], fs[i].span(), p);
  return StratifiedMonoid(s.cone(), std::move(ls));
}

bool is_seminormal(const AffineMonoid& s) {
  AffineMonoid sn = from_strata(seminormalization(s));
  MembershipTester t(s);
  return std::all_of(sn.generators().begin(), sn.generators().end(),
                     [&](const IntVec& g) { return t(g); });
}

bool is_weakly_normal(const AffineMonoid& s, unsigned long p) {
  check_characteristic(p);
  if (!is_seminormal(s)) return false;
  if (p == 0) return true;
  auto strat = stratify(s);
  for (std::size_t i = 0; i < strat.faces().size(); ++i) {
    Int idx = *lattice_index(strat.lattices()[i], strat.faces()[i].span());
    if (idx % p == 0) return false;
  }
  return true;
}

AffineMonoid from_strata(const StratifiedMonoid& s, std::optional<unsigned long> degree_bound,
                         long box) {
  Int bound = degree_bound ? Int(*degree_bound)
                           : default_degree_bound(s.cone(), s.faces(), s.lattices());
  // faces()[0] is the minimal face, i.e. the lineality space
  return extract_generators(
      s.cone(), s.lattices().front(), [&](std::span<const Int> x) { return s.contains(x); }, bound,
      box);
}

// ---------------------------------------------------------------------------

namespace {

RelativeNormalization relative(const AffineMonoid& s, const AffineMonoid& ext,
                               StratifiedMonoid strata) {
  if (s.ambient_rank() != ext.ambient_rank())
    throw Error(ErrorKind::DimensionMismatch, "monoids of different ambient rank");
  MembershipTester in_ext(ext);
  for (const auto& g : s.generators())
    if (!in_ext(g))
      throw Error(ErrorKind::InvalidArgument, "generator " + format(g) + " is not in the extension",
                  g);
  for (const auto& g : ext.generators())
    if (!s.cone().contains(g))
      throw Error(ErrorKind::NotFiniteExtension,
                  "no multiple of " + format(g) + " lies in the smaller monoid", g);
  return {std::move(strata), ext};
}

}  // namespace

AffineMonoid RelativeNormalization::generators(std::optional<unsigned long> degree_bound,
                                               long box) const {
  std::vector<Sublattice> meet;
  for (std::size_t i = 0; i < strata.faces().size(); ++i)
    meet.push_back(intersect(strata.lattices()[i], face_restriction(extension, strata.faces()[i]).group()));
  Int bound;
  if (degree_bound) {
    bound = *degree_bound;
  } else {
    bound = default_degree_bound(strata.cone(), strata.faces(), meet);
    const IntVec ell = strata.cone().grading();
    for (const auto& g : extension.generators()) bound = std::max(bound, Int(2 * dot(ell, g)));
  }
  return extract_generators(
      strata.cone(), meet.front(), [&](std::span<const Int> x) { return contains(x); }, bound, box);
}

RelativeNormalization relative_sn(const AffineMonoid& s, const AffineMonoid& ext) {
  return relative(s, ext, seminormalization(s));
}

RelativeNormalization relative_wn(const AffineMonoid& s, const AffineMonoid& ext, unsigned long p) {
  return relative(s, ext, weak_normalization(s, p));
}

// ---------------------------------------------------------------------------

std::optional<Int> sn_threshold(const AffineMonoid& s, std::span<const Int> m) {
  if (m.size() != s.ambient_rank())
    throw Error(ErrorKind::DimensionMismatch, "vector " + format(m) + " has wrong length");
  if (!s.cone().contains(m)) return std::nullopt;
  if (is_zero(m)) return Int(1);
  Cone tau;
  for (auto& t : faces(s.cone()))
    if (t.relint_contains(m)) tau = std::move(t);
  const auto gens = face_restriction(s, tau).generators();
  const std::size_t n = s.ambient_rank();
  IntMatrix a = IntMatrix::from_columns(n, gens);

  // m = sum z_i s_i over the integers
  auto z = solve_integer(a, m);
  if (!z) return Int(1);

  // q m = sum q_i s_i with every q, q_i > 0: push q m - sum s_i into the
  // face, then write it as a nonnegative combination of independent generators.
  IntVec total = zero_vector(n);
  for (const auto& g : gens) total = add(total, g);
  Int q = 1;
  IntVec v;
  for (int j = 0;; ++j) {
    if (j > 200) throw Error(ErrorKind::Internal, "no positive representation of " + format(m));
    v = sub(scale(q, m), total);
    if (tau.contains(v)) break;
    q *= 2;
  }
  std::optional<RatVec> coef;
  std::vector<std::size_t> chosen;
  for_each_subset(gens.size(), tau.dim(), [&](std::span<const std::size_t> subset) {
    std::vector<IntVec> cols;
    for (auto i : subset) cols.push_back(gens[i]);
    IntMatrix b = IntMatrix::from_columns(n, cols);
    if (rank(b) != tau.dim()) return true;
    auto x = solve_rational(b, v);
    if (!x || std::any_of(x->begin(), x->end(), [](const Rat& r) { return r < 0; })) return true;
    coef = x;
    chosen.assign(subset.begin(), subset.end());
    return false;
  });
  if (!coef) throw Error(ErrorKind::Internal, "no Caratheodory representation of " + format(v));
  Int den = 1;
  for (const auto& r : *coef) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), r.get_den_mpz_t());
  std::vector<Int> qi(gens.size(), den);
  for (std::size_t j = 0; j < chosen.size(); ++j) qi[chosen[j]] += (*coef)[j].get_num() * (den / (*coef)[j].get_den());
  const Int big_q = den * q;

  Int l = 0;
  for (std::size_t i = 0; i < gens.size(); ++i)
    if ((*z)[i] < 0) {
      Rat need(Int(-(*z)[i]), qi[i]);
      need.canonicalize();
      l = std::max(l, ceil_div(need));
    }
  const Int lq = l * big_q;
  return std::max(Int(1), Int((lq - 1) * lq));
}

bool sn_member_oracle(const AffineMonoid& s, std::span<const Int> m, unsigned long window) {
  if (window < 1) throw Error(ErrorKind::InvalidArgument, "window must be at least 1");
  auto n0 = sn_threshold(s, m);
  if (!n0) return false;
  MembershipTester t(s);
  for (unsigned long i = 0; i <= window; ++i)
    if (!t(scale(*n0 + i, m))) return false;
  return true;
}

}  // namespace torf
