#pragma once

// The modules A^p(X) = sum over the support of chi^m * wedge^p V_m, with
// V_m = Q (x) gp(S_{sigma_m}), and the de Rham differential
// chi^m w -> chi^m (alpha(m) ^ w).  Everything is computed degree by degree.

#include "torf/complex.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace torf {

// Lexicographically ordered p-subsets of {0, ..., d-1}: the basis of wedge^p.
std::vector<std::vector<std::size_t>> wedge_basis(std::size_t d, std::size_t p);
std::size_t binomial(std::size_t n, std::size_t k);

struct FormSpace {
  IntVec degree;
  std::size_t cone = 0;       // index of sigma_m in the fan
  std::vector<IntVec> basis;  // HNF basis of gp(S_{sigma_m})
  std::size_t dim() const { return basis.size(); }
};

// A homogeneous p-form: degree m -> coordinates in wedge_basis(dim V_m, p).
struct GradedForm {
  std::size_t p = 0;
  std::map<IntVec, RatVec> terms;

  friend bool operator==(const GradedForm&, const GradedForm&) = default;
};

struct FiberComplex {
  IntVec degree;
  std::size_t dim = 0;
  // maps[p] : wedge^p -> wedge^{p+1}, p = 0 .. dim-1
  std::vector<IntMatrix> maps;
};

struct BettiTable {
  std::vector<std::size_t> dims;  // h^0 .. h^n
  std::optional<long> box;        // nullopt: theoretical mode
};

struct PairDimsRow {
  IntVec degree;
  std::size_t lhs = 0;  // dim of the A^p(X, Y) fiber
  std::size_t rhs = 0;  // sum over cones outside Y of S_sigma cap relint sigma contributions
};

// Degrees in |X| but not in |Y|.  An empty subfan means Y is empty.
class PairFilter {
 public:
  PairFilter(const MonoidalComplex& x, std::span<const Cone> subfan);
  bool operator()(std::span<const Int> m) const;
  const std::optional<MonoidalComplex>& y() const noexcept { return y_; }

 private:
  const MonoidalComplex* x_;
  std::optional<MonoidalComplex> y_;
};

class FormModule {
 public:
  // NotWeaklyNormal unless x is weakly normal in characteristic 0.
  explicit FormModule(MonoidalComplex x);

  const MonoidalComplex& complex() const noexcept { return x_; }

  FormSpace fiber_space(std::span<const Int> m) const;
  // Coordinates of m in the basis of V_m.
  IntVec alpha(std::span<const Int> m) const;

  GradedForm module_action(std::span<const Int> mp, const GradedForm& w) const;
  GradedForm differential(const GradedForm& w) const;
  // chi^{m'} (alpha(m') ^ w): the extra term in d(chi^{m'} w).
  GradedForm dlog_action(std::span<const Int> mp, const GradedForm& w) const;
  GradedForm restrict(const GradedForm& w, const Cone& t) const;
  GradedForm add(const GradedForm& a, const GradedForm& b) const;

  FiberComplex fiber_complex(std::span<const Int> m) const;

  // threads = 0 picks the hardware concurrency
  BettiTable betti(std::optional<long> box, std::span<const Cone> pair_subfan = {},
                   unsigned threads = 1) const;
  std::vector<PairDimsRow> pair_dims(std::span<const Cone> subfan, std::size_t p, long box) const;

  // Support degrees in the box, in lexicographic order.
  std::vector<IntVec> support_in_box(long box) const;

 private:
  MonoidalComplex x_;
};

// h^p = dim wedge^p - rank d_p - rank d_{p-1}, padded to length ambient_rank + 1.
std::vector<std::size_t> fiber_cohomology(const FiberComplex& fc, std::size_t ambient_rank);

std::function<bool(std::span<const Int>)> pair_degree_filter(const MonoidalComplex& x,
                                                             std::span<const Cone> subfan);

struct DegreeDim {
  IntVec degree;
  std::size_t dim = 0;
};
// For any complex: fiber dimensions of A^p computed on the characteristic-0
// weak normalization, over its support degrees in the box.
std::vector<DegreeDim> hdiff_general(const MonoidalComplex& x, std::size_t p, long box,
                                     std::optional<unsigned long> degree_bound = {});

}  // namespace torf
