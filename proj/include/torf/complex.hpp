#pragma once

// Monoidal complexes (M, fan, (S_sigma)) and their toric face rings.

#include "torf/monoid.hpp"

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace torf {

class MonoidalComplex {
 public:
  MonoidalComplex() = default;

  std::size_t ambient_rank() const noexcept { return fan_.ambient_rank(); }
  const Fan& fan() const noexcept { return fan_; }
  std::size_t size() const noexcept { return fan_.size(); }
  // Aligned with fan().cones().
  const std::vector<AffineMonoid>& monoids() const noexcept { return monoids_; }
  const AffineMonoid& monoid(std::size_t i) const { return monoids_[i]; }
  const AffineMonoid& monoid_of(const Cone& c) const;

  // Index of sigma_m, the cone holding m in its relative interior, when m is in
  // the support.
  std::optional<std::size_t> locate(std::span<const Int> m) const;
  bool in_support(std::span<const Int> m) const { return locate(m).has_value(); }
  // Some cone of the fan has both cones as faces.
  bool joinable(std::size_t i, std::size_t j) const { return join_[i * size() + j]; }

  friend bool operator==(const MonoidalComplex& a, const MonoidalComplex& b) {
    return a.fan_ == b.fan_ && a.monoids_ == b.monoids_;
  }

 private:
  friend MonoidalComplex complex_validate(const Fan&, std::vector<AffineMonoid>, long);
  Fan fan_;
  std::vector<AffineMonoid> monoids_;
  std::vector<bool> join_;
};

// Checks that each S_sigma generates sigma (GenerationFailure) and that
// S_tau = S_sigma cap tau for tau a face of sigma (CompatibilityFailure, with
// a witness), the latter exactly by generators and again on a box.
MonoidalComplex complex_validate(const Fan& fan, std::vector<AffineMonoid> monoids,
                                 long box = 4);

// S_sigma = Z^n cap sigma.
MonoidalComplex full_complex(const Fan& fan);
// S cap sigma for sigma in a subfan of the face fan of the cone of S.
MonoidalComplex complex_from_monoid_subfan(const AffineMonoid& s, std::span<const Cone> subfan);

std::optional<Cone> support_locate(const MonoidalComplex& x, std::span<const Int> m);

// Finite Q-linear combination of monomials chi^m, m in the support.
using RingElem = std::map<IntVec, Rat>;

RingElem ring_mult(const MonoidalComplex& x, const RingElem& a, const RingElem& b);
// chi^m chi^m' is nonzero
bool monomials_multiply(const MonoidalComplex& x, std::span<const Int> m, std::span<const Int> mp);

struct OrbitRow {
  Cone cone;
  Sublattice lattice;  // gp(S_sigma), the character lattice of the orbit torus
  bool facet = false;
  bool closed = false;
};
std::vector<OrbitRow> orbits(const MonoidalComplex& x);

MonoidalComplex subcomplex(const MonoidalComplex& x, std::span<const Cone> subfan);
// One subcomplex per facet, on the faces of that facet.
std::vector<MonoidalComplex> components(const MonoidalComplex& x);

// Lambda_sigma = gp(S_sigma), aligned with the fan.
std::vector<Sublattice> classify(const MonoidalComplex& x);
// Inverse of classify on seminormal complexes.  Checks nesting and finite
// index (BadLatticeFamily).
MonoidalComplex complex_from_lattice_family(const Fan& fan, std::span<const Sublattice> family,
                                            std::optional<unsigned long> degree_bound = {},
                                            long box = kDefaultVerificationBox);

MonoidalComplex sn_complex(const MonoidalComplex& x, std::optional<unsigned long> degree_bound = {});
MonoidalComplex wn_complex(const MonoidalComplex& x, unsigned long p,
                           std::optional<unsigned long> degree_bound = {});

bool is_seminormal_complex(const MonoidalComplex& x);
bool is_weakly_normal_complex(const MonoidalComplex& x, unsigned long p);

// Localization at the orbit of t: fan {sigma - t}, monoids S_sigma - S_t.
MonoidalComplex germ_at(const MonoidalComplex& x, const Cone& t);

}  // namespace torf
