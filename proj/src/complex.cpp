#include "torf/complex.hpp"

#include <algorithm>

namespace torf {

const AffineMonoid& MonoidalComplex::monoid_of(const Cone& c) const {
  auto i = fan_.index_of(c);
  if (!i) throw Error(ErrorKind::ConeNotInFan, c.to_string() + " is not a cone of the fan");
  return monoids_[*i];
}

std::optional<std::size_t> MonoidalComplex::locate(std::span<const Int> m) const {
  if (m.size() != ambient_rank())
    throw Error(ErrorKind::DimensionMismatch, "degree " + format(m) + " has wrong length");
  auto i = fan_.locate(m);
  if (!i || !monoids_[*i].contains(m)) return std::nullopt;
  return i;
}

MonoidalComplex complex_validate(const Fan& fan, std::vector<AffineMonoid> monoids, long box) {
  const std::size_t n = fan.ambient_rank();
  if (monoids.size() != fan.size())
    throw Error(ErrorKind::InvalidArgument, "expected one monoid per cone");
  for (std::size_t i = 0; i < fan.size(); ++i) {
    const Cone& sigma = fan[i];
    const AffineMonoid& s = monoids[i];
    if (s.ambient_rank() != n)
      throw Error(ErrorKind::DimensionMismatch, "monoid over " + sigma.to_string() + " has wrong rank");
    if (s.cone() == sigma) continue;
    for (const auto& g : s.generators())
      if (!sigma.contains(g))
        throw Error(ErrorKind::GenerationFailure,
                    "generator " + format(g) + " lies outside " + sigma.to_string(), g);
    for (const auto& r : sigma.generators())
      if (!s.cone().contains(r))
        throw Error(ErrorKind::GenerationFailure,
                    "monoid over " + sigma.to_string() + " does not reach " + format(r), r);
  }

  std::vector<MembershipTester> testers;
  for (const auto& s : monoids) testers.emplace_back(s);
  auto fail = [&](std::size_t i, std::size_t j, const IntVec& w) {
    throw Error(ErrorKind::CompatibilityFailure,
                "monoid over " + fan[i].to_string() + " differs from the restriction of the one over " +
                    fan[j].to_string() + " at " + format(w),
                w);
  };
  for (std::size_t j = 0; j < fan.size(); ++j)
    for (std::size_t i = 0; i < fan.size(); ++i) {
      if (i == j || !fan.is_face(i, j)) continue;
      AffineMonoid restricted = face_restriction(monoids[j], fan[i]);
      for (const auto& g : restricted.generators())
        if (!testers[i](g)) fail(i, j, g);
      for (const auto& g : monoids[i].generators())
        if (!testers[j](g)) fail(i, j, g);
    }
  // on the box: membership in every cone through x agrees with membership in
  // the smallest one, which covers every face pair at once
  for_each_box_point(n, box, [&](const IntVec& x) {
    auto i = fan.locate(x);
    if (!i) return;
    const bool in_small = testers[*i](x);
    for (std::size_t j = 0; j < fan.size(); ++j)
      if (j != *i && fan.is_face(*i, j) && testers[j](x) != in_small) fail(*i, j, x);
  });

  MonoidalComplex x;
  x.fan_ = fan;
  x.monoids_ = std::move(monoids);
  const std::size_t k = fan.size();
  x.join_.assign(k * k, false);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t c = 0; c < k && !x.join_[a * k + b]; ++c)
        if (fan.is_face(a, c) && fan.is_face(b, c)) x.join_[a * k + b] = true;
  return x;
}

MonoidalComplex full_complex(const Fan& fan) {
  std::vector<AffineMonoid> m;
  for (const auto& c : fan.cones())
    m.emplace_back(fan.ambient_rank(), saturated_generators(c, c.span()));
  return complex_validate(fan, std::move(m));
}

MonoidalComplex complex_from_monoid_subfan(const AffineMonoid& s, std::span<const Cone> subfan) {
  for (const auto& c : subfan)
    if (!is_face_of(c, s.cone()))
      throw Error(ErrorKind::NotASubfan,
                  c.to_string() + " is not a face of " + s.cone().to_string(), c.relint_point());
  Fan f;
  try {
    f = fan_validate(s.ambient_rank(), subfan);
  } catch (const Error& e) {
    throw Error(ErrorKind::NotASubfan, e.what(), e.witness());
  }
  std::vector<AffineMonoid> m;
  for (const auto& c : f.cones()) m.push_back(face_restriction(s, c));
  return complex_validate(f, std::move(m));
}

std::optional<Cone> support_locate(const MonoidalComplex& x, std::span<const Int> m) {
  auto i = x.locate(m);
  if (!i) return std::nullopt;
  return x.fan()[*i];
}

bool monomials_multiply(const MonoidalComplex& x, std::span<const Int> m, std::span<const Int> mp) {
  auto a = x.locate(m);
  auto b = x.locate(mp);
  if (!a) throw Error(ErrorKind::DegreeNotInSupport, format(m) + " is not in the support", IntVec(m.begin(), m.end()));
  if (!b) throw Error(ErrorKind::DegreeNotInSupport, format(mp) + " is not in the support", IntVec(mp.begin(), mp.end()));
  return x.joinable(*a, *b);
}

RingElem ring_mult(const MonoidalComplex& x, const RingElem& a, const RingElem& b) {
  RingElem out;
  for (const auto& [m, c] : a)
    for (const auto& [mp, cp] : b) {
      if (!monomials_multiply(x, m, mp)) continue;
      Rat& slot = out[add(m, mp)];
      slot += c * cp;
    }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

std::vector<OrbitRow> orbits(const MonoidalComplex& x) {
  const Fan& f = x.fan();
  Cone minimal = fan_minimal_cone(f);
  auto facets = fan_facets(f);
  std::vector<OrbitRow> rows;
  for (std::size_t i = 0; i < f.size(); ++i)
    rows.push_back({f[i], x.monoid(i).group(),
                    std::find(facets.begin(), facets.end(), f[i]) != facets.end(), f[i] == minimal});
  return rows;
}

MonoidalComplex subcomplex(const MonoidalComplex& x, std::span<const Cone> subfan) {
  auto idx = subfan_indices(x.fan(), subfan);
  if (idx.empty()) throw Error(ErrorKind::NotASubfan, "a subcomplex needs at least one cone");
  std::vector<Cone> cones;
  for (auto i : idx) cones.push_back(x.fan()[i]);
  Fan f = fan_validate(x.ambient_rank(), cones);
  std::vector<AffineMonoid> m;
  for (const auto& c : f.cones()) m.push_back(x.monoid_of(c));
  return complex_validate(f, std::move(m));
}

std::vector<MonoidalComplex> components(const MonoidalComplex& x) {
  std::vector<MonoidalComplex> out;
  for (const auto& facet : fan_facets(x.fan())) {
    auto fs = faces(facet);
    out.push_back(subcomplex(x, fs));
  }
  return out;
}

std::vector<Sublattice> classify(const MonoidalComplex& x) {
  std::vector<Sublattice> out;
  for (const auto& s : x.monoids()) out.push_back(s.group());
  return out;
}

MonoidalComplex complex_from_lattice_family(const Fan& fan, std::span<const Sublattice> family,
                                            std::optional<unsigned long> degree_bound, long box) {
  if (family.size() != fan.size())
    throw Error(ErrorKind::BadLatticeFamily, "expected one lattice per cone");
  for (std::size_t i = 0; i < fan.size(); ++i) {
    const Cone& c = fan[i];
    for (const auto& b : family[i].basis())
      if (!c.span().contains(b))
        throw Error(ErrorKind::BadLatticeFamily,
                    "lattice over " + c.to_string() + " leaves the span of the cone", b);
    if (family[i].rank() != c.dim())
      throw Error(ErrorKind::BadLatticeFamily,
                  "lattice over " + c.to_string() + " does not have finite index", c.relint_point());
  }
  for (std::size_t j = 0; j < fan.size(); ++j)
    for (std::size_t i = 0; i < fan.size(); ++i) {
      if (i == j || !fan.is_face(i, j)) continue;
      for (const auto& b : family[i].basis())
        if (!family[j].contains(b))
          throw Error(ErrorKind::BadLatticeFamily,
                      "lattice over " + fan[i].to_string() + " is not contained in the one over " +
                          fan[j].to_string(),
                      b);
    }
  // generators are extracted on the facets; every other cone gets the
  // restriction of a facet through it, which realizes the same strata
  std::vector<std::optional<AffineMonoid>> m(fan.size());
  for (const auto& facet : fan_facets(fan)) {
    std::vector<Sublattice> strata;
    for (const auto& t : faces(facet)) strata.push_back(family[*fan.index_of(t)]);
    m[*fan.index_of(facet)] = from_strata(StratifiedMonoid(facet, std::move(strata)), degree_bound, box);
  }
  std::vector<AffineMonoid> out(fan.size());
  for (std::size_t i = 0; i < fan.size(); ++i) {
    if (m[i]) {
      out[i] = *m[i];
      continue;
    }
    for (std::size_t j = 0; j < fan.size(); ++j)
      if (m[j] && fan.is_face(i, j)) {
        out[i] = face_restriction(*m[j], fan[i]);
        break;
      }
  }
  return complex_validate(fan, std::move(out));
}

MonoidalComplex wn_complex(const MonoidalComplex& x, unsigned long p,
                           std::optional<unsigned long> degree_bound) {
  check_characteristic(p);
  std::vector<Sublattice> family;
  for (std::size_t i = 0; i < x.size(); ++i)
    family.push_back(p_saturation(x.monoid(i).group(), x.fan()[i].span(), p));
  return complex_from_lattice_family(x.fan(), family, degree_bound);
}

MonoidalComplex sn_complex(const MonoidalComplex& x, std::optional<unsigned long> degree_bound) {
  return wn_complex(x, 0, degree_bound);
}

bool is_seminormal_complex(const MonoidalComplex& x) {
  for (const auto& f : fan_facets(x.fan()))
    if (!is_seminormal(x.monoid_of(f))) return false;
  return true;
}

bool is_weakly_normal_complex(const MonoidalComplex& x, unsigned long p) {
  check_characteristic(p);
  bool facetwise = true;
  for (const auto& f : fan_facets(x.fan())) facetwise &= is_weakly_normal(x.monoid_of(f), p);

  // index criterion over every cone (each cone is a face of some facet)
  bool by_index = is_seminormal_complex(x);
  if (p != 0)
    for (std::size_t i = 0; i < x.size() && by_index; ++i)
      by_index = *lattice_index(x.monoid(i).group(), x.fan()[i].span()) % p != 0;
  if (facetwise != by_index)
    throw Error(ErrorKind::Internal, "facet-wise and index criteria for weak normality disagree");
  return facetwise;
}

MonoidalComplex germ_at(const MonoidalComplex& x, const Cone& t) {
  Fan st = star_fan(x.fan(), t);
  const auto ti = *x.fan().index_of(t);
  std::vector<AffineMonoid> m(st.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!x.fan().is_face(ti, j)) continue;
    std::vector<IntVec> g = x.monoid(j).generators();
    for (const auto& v : x.monoid(ti).generators()) g.push_back(neg(v));
    m[*st.index_of(cone_difference(x.fan()[j], t))] = AffineMonoid(x.ambient_rank(), g);
  }
  return complex_validate(st, std::move(m));
}

}  // namespace torf
