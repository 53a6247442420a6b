#include "torf/cone.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

namespace torf {

namespace {

std::strong_ordering compare_vectors(const std::vector<IntVec>& a, const std::vector<IntVec>& b) {
  if (a.size() != b.size()) return a.size() <=> b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return std::strong_ordering::less;
    if (b[i] < a[i]) return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

// Calls f on every k-subset of {0, ..., n-1}, in lexicographic order.
template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    f(std::span<const std::size_t>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

struct DualData {
  Sublattice span;
  std::vector<IntVec> normals;
};

// Facet normals of cone(gens), each projected orthogonally into the span of
// the cone and made primitive.  A facet contains dim-1 independent
// generators, so every facet is found by scanning (dim-1)-subsets.
DualData facet_normals(std::size_t n, std::span<const IntVec> gens) {
  std::vector<IntVec> g;
  for (const auto& v : gens) {
    if (v.size() != n)
      throw Error(ErrorKind::DimensionMismatch,
                  "generator " + format(v) + " does not have length " + std::to_string(n));
    if (!is_zero(v)) g.push_back(primitive(std::span<const Int>(v)));
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());

  DualData out;
  out.span = saturate(Sublattice::from_generators(n, g));
  const std::size_t d = out.span.rank();
  if (d == 0) return out;

  std::vector<IntVec> coords;
  coords.reserve(g.size());
  for (const auto& v : g) coords.push_back(*out.span.coordinates(v));

  std::set<IntVec> found;
  for_each_subset(coords.size(), d - 1, [&](std::span<const std::size_t> subset) {
    std::vector<IntVec> rows;
    for (auto i : subset) rows.push_back(coords[i]);
    Sublattice k = kernel_basis(IntMatrix::from_rows(d, rows));
    if (k.rank() != 1) return;
    IntVec w = k.basis()[0];
    bool pos = false, negs = false;
    for (const auto& c : coords) {
      int s = sgn(dot(w, c));
      pos |= s > 0;
      negs |= s < 0;
      if (pos && negs) return;
    }
    if (negs) w = neg(w);
    found.insert(std::move(w));
  });

  IntMatrix b = out.span.basis_matrix();
  IntMatrix gram = b.transpose() * b;
  for (const auto& w : found) {
    auto z = solve_rational(gram, w);
    RatVec a(n, Rat(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j) a[i] += Rat(b(i, j)) * (*z)[j];
    out.normals.push_back(primitive(std::span<const Rat>(a)));
  }
  std::sort(out.normals.begin(), out.normals.end());
  return out;
}

Sublattice kernel_of_rows(std::size_t n, const std::vector<IntVec>& rows) {
  if (rows.empty()) return Sublattice::full(n);
  return kernel_basis(IntMatrix::from_rows(n, rows));
}

}  // namespace

namespace {

// The dual description is the expensive part, and the same generator sets come
// back many times (faces, restrictions, normalizations), so results are memoized.
struct ConeCache {
  std::mutex mu;
  std::map<std::pair<std::size_t, std::vector<IntVec>>, Cone> cones;
};

ConeCache& cone_cache() {
  static ConeCache c;
  return c;
}

}  // namespace

Cone Cone::from_generators(std::size_t ambient_rank, std::span<const IntVec> gens) {
  std::pair<std::size_t, std::vector<IntVec>> key{ambient_rank, {gens.begin(), gens.end()}};
  std::sort(key.second.begin(), key.second.end());
  key.second.erase(std::unique(key.second.begin(), key.second.end()), key.second.end());
  ConeCache& cache = cone_cache();
  {
    std::lock_guard lock(cache.mu);
    if (auto it = cache.cones.find(key); it != cache.cones.end()) return it->second;
  }
  Cone c = build(ambient_rank, key.second);
  std::lock_guard lock(cache.mu);
  if (cache.cones.size() > 50000) cache.cones.clear();
  cache.cones.emplace(std::move(key), c);
  return c;
}

Cone Cone::build(std::size_t ambient_rank, std::span<const IntVec> gens) {
  Cone c;
  c.ambient_ = ambient_rank;
  DualData dd = facet_normals(ambient_rank, gens);
  c.span_ = dd.span;
  c.inequalities_ = std::move(dd.normals);
  c.equations_ = kernel_basis(c.span_.basis_matrix().transpose()).basis();

  std::vector<IntVec> rows = c.inequalities_;
  rows.insert(rows.end(), c.equations_.begin(), c.equations_.end());
  c.lineality_ = kernel_of_rows(ambient_rank, rows);

  std::vector<IntVec> dual = rows;
  for (const auto& e : c.equations_) dual.push_back(neg(e));
  c.rays_ = facet_normals(ambient_rank, dual).normals;
  return c;
}

Cone Cone::from_inequalities(std::size_t ambient_rank, std::span<const IntVec> inequalities,
                             std::span<const IntVec> equations) {
  std::vector<IntVec> rows(inequalities.begin(), inequalities.end());
  rows.insert(rows.end(), equations.begin(), equations.end());
  for (const auto& r : rows)
    if (r.size() != ambient_rank)
      throw Error(ErrorKind::DimensionMismatch, "covector " + format(r) + " has wrong length");
  std::vector<IntVec> dual = rows;
  for (const auto& e : equations) dual.push_back(neg(e));
  std::vector<IntVec> gens = facet_normals(ambient_rank, dual).normals;
  const Sublattice lin = kernel_of_rows(ambient_rank, rows);
  for (const auto& b : lin.basis()) {
    gens.push_back(b);
    gens.push_back(neg(b));
  }
  return from_generators(ambient_rank, gens);
}

Cone Cone::zero(std::size_t ambient_rank) { return from_generators(ambient_rank, {}); }

std::vector<IntVec> Cone::generators() const {
  std::vector<IntVec> g = rays_;
  for (const auto& b : lineality_.basis()) {
    g.push_back(b);
    g.push_back(neg(b));
  }
  return g;
}

bool Cone::contains(std::span<const Int> v) const {
  if (v.size() != ambient_)
    throw Error(ErrorKind::DimensionMismatch, "vector " + format(v) + " has wrong length");
  for (const auto& e : equations_)
    if (dot_sign(e, v) != 0) return false;
  for (const auto& a : inequalities_)
    if (dot_sign(a, v) < 0) return false;
  return true;
}

bool Cone::relint_contains(std::span<const Int> v) const {
  if (v.size() != ambient_)
    throw Error(ErrorKind::DimensionMismatch, "vector " + format(v) + " has wrong length");
  for (const auto& e : equations_)
    if (dot_sign(e, v) != 0) return false;
  for (const auto& a : inequalities_)
    if (dot_sign(a, v) <= 0) return false;
  return true;
}

bool Cone::contains(const Cone& other) const {
  if (other.ambient_ != ambient_) return false;
  for (const auto& g : other.generators())
    if (!contains(g)) return false;
  return true;
}

IntVec Cone::relint_point() const {
  IntVec p = zero_vector(ambient_);
  for (const auto& r : rays_) p = add(p, r);
  return p;
}

IntVec Cone::grading() const {
  IntVec l = zero_vector(ambient_);
  for (const auto& a : inequalities_) l = add(l, a);
  return l;
}

Cone Cone::face_of_tight(std::span<const std::size_t> tight) const {
  std::vector<IntVec> g;
  for (const auto& v : generators()) {
    bool on = std::all_of(tight.begin(), tight.end(),
                          [&](std::size_t i) { return dot(inequalities_[i], v) == 0; });
    if (on) g.push_back(v);
  }
  return from_generators(ambient_, g);
}

std::string Cone::to_string() const {
  std::ostringstream os;
  os << "cone{";
  bool first = true;
  for (const auto& r : rays_) {
    if (!first) os << ',';
    os << format(r);
    first = false;
  }
  for (const auto& b : lineality_.basis()) {
    if (!first) os << ',';
    os << "+-" << format(b);
    first = false;
  }
  os << '}';
  return os.str();
}

std::strong_ordering operator<=>(const Cone& a, const Cone& b) {
  if (auto c = a.ambient_ <=> b.ambient_; c != 0) return c;
  if (auto c = a.dim() <=> b.dim(); c != 0) return c;
  if (auto c = compare_vectors(a.lineality_.basis(), b.lineality_.basis()); c != 0) return c;
  return compare_vectors(a.rays_, b.rays_);
}

std::vector<Cone> faces(const Cone& c) {
  std::set<Cone> seen{c};
  std::deque<Cone> todo{c};
  while (!todo.empty()) {
    Cone f = std::move(todo.front());
    todo.pop_front();
    for (std::size_t i = 0; i < f.inequalities().size(); ++i) {
      std::size_t idx[] = {i};
      Cone g = f.face_of_tight(idx);
      if (seen.insert(g).second) todo.push_back(std::move(g));
    }
  }
  return {seen.begin(), seen.end()};
}

bool is_face_of(const Cone& t, const Cone& s) {
  if (t.ambient_rank() != s.ambient_rank())
    throw Error(ErrorKind::DimensionMismatch, "cones of different ambient rank");
  if (!s.contains(t)) return false;
  std::vector<std::size_t> tight;
  auto tg = t.generators();
  for (std::size_t i = 0; i < s.inequalities().size(); ++i) {
    bool on = std::all_of(tg.begin(), tg.end(),
                          [&](const IntVec& g) { return dot(s.inequalities()[i], g) == 0; });
    if (on) tight.push_back(i);
  }
  return s.face_of_tight(tight) == t;
}

Cone intersect(const Cone& a, const Cone& b) {
  if (a.ambient_rank() != b.ambient_rank())
    throw Error(ErrorKind::DimensionMismatch, "cones of different ambient rank");
  std::vector<IntVec> ineq = a.inequalities();
  ineq.insert(ineq.end(), b.inequalities().begin(), b.inequalities().end());
  std::vector<IntVec> eq = a.equations();
  eq.insert(eq.end(), b.equations().begin(), b.equations().end());
  return Cone::from_inequalities(a.ambient_rank(), ineq, eq);
}

Cone cone_difference(const Cone& s, const Cone& t) {
  if (!is_face_of(t, s))
    throw Error(ErrorKind::NotAFace, t.to_string() + " is not a face of " + s.to_string());
  std::vector<IntVec> g = s.generators();
  for (const auto& v : t.generators()) g.push_back(neg(v));
  return Cone::from_generators(s.ambient_rank(), g);
}

Cone cone_from_generators(std::size_t ambient_rank, std::span<const IntVec> gens) {
  return Cone::from_generators(ambient_rank, gens);
}

bool relint_contains(const Cone& c, std::span<const Int> v) { return c.relint_contains(v); }

// ---------------------------------------------------------------------------

std::optional<std::size_t> Fan::index_of(const Cone& c) const {
  auto it = std::lower_bound(cones_.begin(), cones_.end(), c);
  if (it == cones_.end() || !(*it == c)) return std::nullopt;
  return static_cast<std::size_t>(it - cones_.begin());
}

std::vector<std::size_t> Fan::faces_of(std::size_t j) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cones_.size(); ++i)
    if (is_face(i, j)) out.push_back(i);
  return out;
}

std::optional<std::size_t> Fan::locate(std::span<const Int> v) const {
  for (std::size_t i = 0; i < cones_.size(); ++i)
    if (cones_[i].relint_contains(v)) return i;
  return std::nullopt;
}

Fan fan_validate(std::size_t ambient_rank, std::span<const Cone> cones) {
  if (cones.empty()) throw Error(ErrorKind::EmptyFan, "a fan needs at least one cone");
  for (const auto& c : cones)
    if (c.ambient_rank() != ambient_rank)
      throw Error(ErrorKind::DimensionMismatch, c.to_string() + " has the wrong ambient rank");

  Fan f;
  f.ambient_ = ambient_rank;
  f.cones_.assign(cones.begin(), cones.end());
  std::sort(f.cones_.begin(), f.cones_.end());
  f.cones_.erase(std::unique(f.cones_.begin(), f.cones_.end()), f.cones_.end());

  for (const auto& c : f.cones_)
    for (const auto& t : faces(c))
      if (!f.index_of(t))
        throw Error(ErrorKind::MissingFace,
                    "face " + t.to_string() + " of " + c.to_string() + " is not in the fan",
                    t.relint_point());

  const std::size_t n = f.cones_.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Cone meet = intersect(f.cones_[i], f.cones_[j]);
      if (!is_face_of(meet, f.cones_[i]) || !is_face_of(meet, f.cones_[j]))
        throw Error(ErrorKind::BadIntersection,
                    f.cones_[i].to_string() + " and " + f.cones_[j].to_string() +
                        " meet in " + meet.to_string() + ", which is not a common face",
                    meet.relint_point());
    }

  // Inside a fan, containment between members is the face relation.
  f.face_.assign(n * n, false);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) f.face_[i * n + j] = f.cones_[j].contains(f.cones_[i]);
  return f;
}

Fan face_fan_closure(std::size_t ambient_rank, std::span<const Cone> cones) {
  std::set<Cone> all;
  for (const auto& c : cones)
    for (auto& t : faces(c)) all.insert(std::move(t));
  std::vector<Cone> v(all.begin(), all.end());
  return fan_validate(ambient_rank, v);
}

std::vector<Cone> fan_facets(const Fan& f) {
  std::vector<Cone> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < f.size() && maximal; ++j)
      if (j != i && f.is_face(i, j)) maximal = false;
    if (maximal) out.push_back(f[i]);
  }
  return out;
}

Cone fan_minimal_cone(const Fan& f) {
  Cone m = f[0];
  for (std::size_t i = 1; i < f.size(); ++i) m = intersect(m, f[i]);
  if (!f.index_of(m)) throw Error(ErrorKind::Internal, "minimal cone " + m.to_string() + " not in fan");
  return m;
}

Fan star_fan(const Fan& f, const Cone& t) {
  auto ti = f.index_of(t);
  if (!ti) throw Error(ErrorKind::ConeNotInFan, t.to_string() + " is not a cone of the fan");
  std::vector<Cone> cones;
  for (std::size_t j = 0; j < f.size(); ++j)
    if (f.is_face(*ti, j)) cones.push_back(cone_difference(f[j], t));
  return fan_validate(f.ambient_rank(), cones);
}

std::vector<std::size_t> subfan_indices(const Fan& f, std::span<const Cone> sub) {
  std::set<std::size_t> idx;
  for (const auto& c : sub) {
    auto i = f.index_of(c);
    if (!i) throw Error(ErrorKind::NotASubfan, c.to_string() + " is not a cone of the fan");
    idx.insert(*i);
  }
  for (auto j : idx)
    for (auto i : f.faces_of(j))
      if (!idx.count(i))
        throw Error(ErrorKind::NotASubfan,
                    "face " + f[i].to_string() + " of " + f[j].to_string() + " is missing",
                    f[i].relint_point());
  return {idx.begin(), idx.end()};
}

}  // namespace torf
