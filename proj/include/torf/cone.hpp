#pragma once

// Rational polyhedral cones in M_R = Q^n and fans of such cones.

#include "torf/linalg.hpp"

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace torf {

// A cone stored in canonical form:
//   lineality : Z^n intersected with the largest linear subspace in the cone
//   rays      : primitive extreme rays of the pointed part (the cone
//               intersected with the orthogonal complement of the lineality
//               space), sorted lexicographically
// From these the dual description is derived: `inequalities` are primitive
// facet normals projected into the span of the cone, `equations` a basis of
// the integer vectors orthogonal to the span.
class Cone {
 public:
  Cone() = default;

  static Cone from_generators(std::size_t ambient_rank, std::span<const IntVec> gens);
  static Cone from_inequalities(std::size_t ambient_rank, std::span<const IntVec> inequalities,
                                std::span<const IntVec> equations = {});
  static Cone zero(std::size_t ambient_rank);

  std::size_t ambient_rank() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return span_.rank(); }
  const std::vector<IntVec>& rays() const noexcept { return rays_; }
  const Sublattice& lineality() const noexcept { return lineality_; }
  const std::vector<IntVec>& inequalities() const noexcept { return inequalities_; }
  const std::vector<IntVec>& equations() const noexcept { return equations_; }
  // Z^n intersected with the linear span of the cone.
  const Sublattice& span() const noexcept { return span_; }

  // rays together with +- the lineality basis
  std::vector<IntVec> generators() const;
  bool is_pointed() const noexcept { return lineality_.rank() == 0; }
  bool is_zero() const noexcept { return dim() == 0; }

  bool contains(std::span<const Int> v) const;
  bool relint_contains(std::span<const Int> v) const;
  bool contains(const Cone& other) const;
  // Sum of the rays: a lattice point in the relative interior.
  IntVec relint_point() const;
  // Sum of the inequalities: positive on every point outside the lineality space.
  IntVec grading() const;

  // The face cut out by the given inequalities (indices into inequalities()).
  Cone face_of_tight(std::span<const std::size_t> tight) const;

  std::string to_string() const;

  friend bool operator==(const Cone& a, const Cone& b) {
    return a.ambient_ == b.ambient_ && a.lineality_ == b.lineality_ && a.rays_ == b.rays_;
  }
  // Canonical order: by dimension, then lineality basis, then rays.
  friend std::strong_ordering operator<=>(const Cone& a, const Cone& b);

 private:
  static Cone build(std::size_t ambient_rank, std::span<const IntVec> gens);

  std::size_t ambient_ = 0;
  std::vector<IntVec> rays_;
  Sublattice lineality_;
  std::vector<IntVec> inequalities_;
  std::vector<IntVec> equations_;
  Sublattice span_;
};

// All faces (the cone itself and its minimal face included), canonically sorted.
std::vector<Cone> faces(const Cone& c);
bool is_face_of(const Cone& t, const Cone& s);
Cone intersect(const Cone& a, const Cone& b);
// The cone generated by s and -t; t must be a face of s.
Cone cone_difference(const Cone& s, const Cone& t);

Cone cone_from_generators(std::size_t ambient_rank, std::span<const IntVec> gens);
bool relint_contains(const Cone& c, std::span<const Int> v);

class Fan {
 public:
  std::size_t ambient_rank() const noexcept { return ambient_; }
  const std::vector<Cone>& cones() const noexcept { return cones_; }
  std::size_t size() const noexcept { return cones_.size(); }
  const Cone& operator[](std::size_t i) const { return cones_[i]; }

  std::optional<std::size_t> index_of(const Cone& c) const;
  // cones()[i] is a face of cones()[j]
  bool is_face(std::size_t i, std::size_t j) const { return face_[i * cones_.size() + j]; }
  std::vector<std::size_t> faces_of(std::size_t j) const;
  // The unique cone containing v in its relative interior, if v is in the support.
  std::optional<std::size_t> locate(std::span<const Int> v) const;

  friend bool operator==(const Fan& a, const Fan& b) { return a.cones_ == b.cones_; }

 private:
  friend Fan fan_validate(std::size_t, std::span<const Cone>);
  std::size_t ambient_ = 0;
  std::vector<Cone> cones_;
  std::vector<bool> face_;
};

// Checks closure under faces (MissingFace) and that any two cones meet in a
// common face (BadIntersection).  Missing faces are reported, never added.
Fan fan_validate(std::size_t ambient_rank, std::span<const Cone> cones);
// The fan of all faces of the given cones.
Fan face_fan_closure(std::size_t ambient_rank, std::span<const Cone> cones);

std::vector<Cone> fan_facets(const Fan& f);
Cone fan_minimal_cone(const Fan& f);
// Fan of the cones sigma - t for t a face of sigma.
Fan star_fan(const Fan& f, const Cone& t);
// Indices of the cones of `sub` inside `f`; NotASubfan when a cone is missing
// or the collection is not closed under faces.  An empty list is accepted.
std::vector<std::size_t> subfan_indices(const Fan& f, std::span<const Cone> sub);

}  // namespace torf
