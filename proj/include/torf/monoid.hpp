#pragma once

// Affine monoids (finitely generated sub-semigroups of Z^n containing 0) and
// their normalizations, described face by face through sublattice families.

#include "torf/cone.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace torf {

class AffineMonoid {
 public:
  AffineMonoid() = default;
  // Zero generators are dropped; 0 is always a member.
  AffineMonoid(std::size_t ambient_rank, std::span<const IntVec> gens);

  std::size_t ambient_rank() const noexcept { return ambient_; }
  const std::vector<IntVec>& generators() const noexcept { return gens_; }
  const Cone& cone() const noexcept { return cone_; }
  // gp(S) = S - S
  const Sublattice& group() const noexcept { return group_; }
  // S intersected with the lineality space of its cone; always a group.
  const Sublattice& lineality_group() const noexcept { return lin_group_; }

  bool contains(std::span<const Int> m) const;

  friend bool operator==(const AffineMonoid& a, const AffineMonoid& b) {
    return a.ambient_ == b.ambient_ && a.gens_ == b.gens_;
  }

 private:
  friend class MembershipTester;
  std::size_t ambient_ = 0;
  std::vector<IntVec> gens_;
  Cone cone_;
  Sublattice group_;
  Sublattice lin_group_;
  std::vector<IntVec> pointed_;  // generators off the lineality space, by decreasing degree
  IntVec grading_;
};

// Membership queries sharing one table of failed subproblems.  Use one tester
// for a batch of queries against the same monoid.
class MembershipTester {
 public:
  explicit MembershipTester(const AffineMonoid& s) : s_(&s) {}
  bool operator()(std::span<const Int> m);

 private:
  const AffineMonoid* s_;
  // residue -> smallest generator index from which it is known to be unreachable
  std::map<IntVec, std::size_t> failed_;
};

Sublattice monoid_gp(const AffineMonoid& s);
Cone monoid_cone(const AffineMonoid& s);
bool member(const AffineMonoid& s, std::span<const Int> m);
// Generated by the generators lying in t; equals S intersected with t.
AffineMonoid face_restriction(const AffineMonoid& s, const Cone& t);

// Generators of lat intersected with c, where lat is a sublattice of full rank
// in the span of c.  Pointed part: irreducible elements; lineality part:
// +- a basis.
std::vector<IntVec> saturated_generators(const Cone& c, const Sublattice& lat);
// Z^n intersected with the cone of S.
AffineMonoid saturation(const AffineMonoid& s);

// A family of sublattices indexed by the faces of a cone.  Realizes the set
// of m with m in Lambda_t for the face t containing m in its relative interior.
class StratifiedMonoid {
 public:
  StratifiedMonoid() = default;
  // lattices[i] belongs to faces(cone)[i]; invariants are checked
  // (BadLatticeFamily).
  StratifiedMonoid(Cone cone, std::vector<Sublattice> lattices);

  const Cone& cone() const noexcept { return cone_; }
  const std::vector<Cone>& faces() const noexcept { return faces_; }
  const std::vector<Sublattice>& lattices() const noexcept { return lattices_; }
  const Sublattice& lattice(const Cone& face) const;
  // Index of the face containing m in its relative interior.
  std::optional<std::size_t> locate(std::span<const Int> m) const;
  bool contains(std::span<const Int> m) const;

  friend bool operator==(const StratifiedMonoid&, const StratifiedMonoid&) = default;

 private:
  Cone cone_;
  std::vector<Cone> faces_;
  std::vector<Sublattice> lattices_;
};

// Lambda_t = gp(S cap t) for every face t.
StratifiedMonoid stratify(const AffineMonoid& s);
StratifiedMonoid seminormalization(const AffineMonoid& s);
// p = 0 or a prime; Lambda_t is p-saturated inside Z^n cap span t.
StratifiedMonoid weak_normalization(const AffineMonoid& s, unsigned long p);

bool is_seminormal(const AffineMonoid& s);
bool is_weakly_normal(const AffineMonoid& s, unsigned long p);

constexpr long kDefaultVerificationBox = 8;

// Finite generating set of the realized set, found greedily up to the given
// degree (default: twice the largest degree of a Hilbert basis element of
// some Lambda_t cap t) and then checked on the verification box.
AffineMonoid from_strata(const StratifiedMonoid& s, std::optional<unsigned long> degree_bound = {},
                         long box = kDefaultVerificationBox);

// The seminormalization / weak normalization of S inside an extension S'
// (every element of S' has a multiple in S).
struct RelativeNormalization {
  StratifiedMonoid strata;
  AffineMonoid extension;

  bool contains(std::span<const Int> m) const {
    return strata.contains(m) && extension.contains(m);
  }
  AffineMonoid generators(std::optional<unsigned long> degree_bound = {},
                          long box = kDefaultVerificationBox) const;
};

RelativeNormalization relative_sn(const AffineMonoid& s, const AffineMonoid& ext);
RelativeNormalization relative_wn(const AffineMonoid& s, const AffineMonoid& ext, unsigned long p);

// Tests nm in S for n in [N0, N0 + window], N0 being the explicit threshold
// read off from the integer and positive rational representations of m.
bool sn_member_oracle(const AffineMonoid& s, std::span<const Int> m, unsigned long window);
// The threshold used above; nullopt when m is outside the cone.
std::optional<Int> sn_threshold(const AffineMonoid& s, std::span<const Int> m);

void check_characteristic(unsigned long p);

}  // namespace torf
