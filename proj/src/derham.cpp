#include "torf/derham.hpp"

#include <algorithm>
#include <memory>
#include <thread>

namespace torf {

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<std::vector<std::size_t>> wedge_basis(std::size_t d, std::size_t p) {
  std::vector<std::vector<std::size_t>> out;
  if (p > d) return out;
  std::vector<std::size_t> idx(p);
  for (std::size_t i = 0; i < p; ++i) idx[i] = i;
  for (;;) {
    out.push_back(idx);
    std::size_t i = p;
    while (i > 0 && idx[i - 1] == d - p + i - 1) --i;
    if (i == 0) return out;
    ++idx[i - 1];
    for (std::size_t j = i; j < p; ++j) idx[j] = idx[j - 1] + 1;
  }
}

namespace {

using Subset = std::vector<std::size_t>;

std::map<Subset, std::size_t> index_of_subsets(std::size_t d, std::size_t p) {
  std::map<Subset, std::size_t> out;
  auto b = wedge_basis(d, p);
  for (std::size_t i = 0; i < b.size(); ++i) out.emplace(b[i], i);
  return out;
}

// alpha ^ eta for alpha in V (coordinates) and eta in wedge^p V.
RatVec wedge_with(std::span<const Int> alpha, const RatVec& eta, std::size_t p) {
  const std::size_t d = alpha.size();
  auto src = index_of_subsets(d, p);
  auto dst = wedge_basis(d, p + 1);
  RatVec out(dst.size(), Rat(0));
  for (std::size_t k = 0; k < dst.size(); ++k) {
    const Subset& j = dst[k];
    for (std::size_t pos = 0; pos < j.size(); ++pos) {
      if (alpha[j[pos]] == 0) continue;
      Subset rest = j;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pos));
      const Rat& e = eta[src.at(rest)];
      if (e == 0) continue;
      Rat term = Rat(alpha[j[pos]]) * e;
      if (pos % 2) out[k] -= term;
      else out[k] += term;
    }
  }
  return out;
}

// wedge^p of a linear map given by its matrix (target dim x source dim).
RatVec wedge_power_apply(const IntMatrix& iota, const RatVec& eta, std::size_t p) {
  auto src = wedge_basis(iota.cols(), p);
  auto dst = wedge_basis(iota.rows(), p);
  RatVec out(dst.size(), Rat(0));
  for (std::size_t b = 0; b < src.size(); ++b) {
    if (eta[b] == 0) continue;
    for (std::size_t a = 0; a < dst.size(); ++a) {
      Int minor = 1;
      if (p > 0) {
        IntMatrix sub(p, p);
        for (std::size_t i = 0; i < p; ++i)
          for (std::size_t j = 0; j < p; ++j) sub(i, j) = iota(dst[a][i], src[b][j]);
        minor = determinant(sub);
      }
      if (minor != 0) out[a] += Rat(minor) * eta[b];
    }
  }
  return out;
}

bool all_zero(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& r) { return r == 0; });
}

void accumulate(std::map<IntVec, RatVec>& terms, const IntVec& m, const RatVec& eta) {
  auto [it, fresh] = terms.emplace(m, eta);
  if (!fresh)
    for (std::size_t i = 0; i < eta.size(); ++i) it->second[i] += eta[i];
  if (all_zero(it->second)) terms.erase(it);
}

std::vector<std::size_t> add_dims(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

}  // namespace

// ---------------------------------------------------------------------------

PairFilter::PairFilter(const MonoidalComplex& x, std::span<const Cone> subfan) : x_(&x) {
  if (!subfan.empty()) y_ = subcomplex(x, subfan);
}

bool PairFilter::operator()(std::span<const Int> m) const {
  return x_->in_support(m) && !(y_ && y_->in_support(m));
}

std::function<bool(std::span<const Int>)> pair_degree_filter(const MonoidalComplex& x,
                                                             std::span<const Cone> subfan) {
  auto f = std::make_shared<PairFilter>(x, subfan);
  return [f](std::span<const Int> m) { return (*f)(m); };
}

FormModule::FormModule(MonoidalComplex x) : x_(std::move(x)) {
  if (!is_weakly_normal_complex(x_, 0))
    throw Error(ErrorKind::NotWeaklyNormal,
                "forms are defined on weakly normal complexes; normalize first");
}

FormSpace FormModule::fiber_space(std::span<const Int> m) const {
  auto i = x_.locate(m);
  if (!i)
    throw Error(ErrorKind::DegreeNotInSupport, format(m) + " is not in the support",
                IntVec(m.begin(), m.end()));
  return {IntVec(m.begin(), m.end()), *i, x_.monoid(*i).group().basis()};
}

IntVec FormModule::alpha(std::span<const Int> m) const {
  auto i = x_.locate(m);
  if (!i)
    throw Error(ErrorKind::DegreeNotInSupport, format(m) + " is not in the support",
                IntVec(m.begin(), m.end()));
  return *x_.monoid(*i).group().coordinates(m);
}

GradedForm FormModule::module_action(std::span<const Int> mp, const GradedForm& w) const {
  GradedForm out{w.p, {}};
  for (const auto& [m, eta] : w.terms) {
    if (!monomials_multiply(x_, mp, m)) continue;
    IntVec target = torf::add(mp, m);
    const Sublattice& from = x_.monoid(*x_.locate(m)).group();
    const Sublattice& to = x_.monoid(*x_.locate(target)).group();
    accumulate(out.terms, target, wedge_power_apply(inclusion_matrix(from, to), eta, w.p));
  }
  return out;
}

GradedForm FormModule::dlog_action(std::span<const Int> mp, const GradedForm& w) const {
  GradedForm out{w.p + 1, {}};
  for (const auto& [m, eta] : w.terms) {
    if (!monomials_multiply(x_, mp, m)) continue;
    IntVec target = torf::add(mp, m);
    const Sublattice& from = x_.monoid(*x_.locate(m)).group();
    const Sublattice& to = x_.monoid(*x_.locate(target)).group();
    RatVec moved = wedge_power_apply(inclusion_matrix(from, to), eta, w.p);
    accumulate(out.terms, target, wedge_with(*to.coordinates(mp), moved, w.p));
  }
  return out;
}

GradedForm FormModule::differential(const GradedForm& w) const {
  GradedForm out{w.p + 1, {}};
  for (const auto& [m, eta] : w.terms) accumulate(out.terms, m, wedge_with(alpha(m), eta, w.p));
  return out;
}

GradedForm FormModule::restrict(const GradedForm& w, const Cone& t) const {
  if (!x_.fan().index_of(t))
    throw Error(ErrorKind::ConeNotInFan, t.to_string() + " is not a cone of the fan");
  GradedForm out{w.p, {}};
  for (const auto& [m, eta] : w.terms)
    if (t.contains(m)) out.terms.emplace(m, eta);
  return out;
}

GradedForm FormModule::add(const GradedForm& a, const GradedForm& b) const {
  if (a.p != b.p) throw Error(ErrorKind::InvalidArgument, "adding forms of different degree");
  GradedForm out = a;
  for (const auto& [m, eta] : b.terms) accumulate(out.terms, m, eta);
  return out;
}

FiberComplex FormModule::fiber_complex(std::span<const Int> m) const {
  IntVec a = alpha(m);
  const std::size_t d = a.size();
  FiberComplex fc{IntVec(m.begin(), m.end()), d, {}};
  for (std::size_t p = 0; p < d; ++p) {
    auto src = wedge_basis(d, p);
    auto dst = index_of_subsets(d, p + 1);
    IntMatrix mat(binomial(d, p + 1), src.size());
    for (std::size_t c = 0; c < src.size(); ++c)
      for (std::size_t j = 0; j < d; ++j) {
        if (std::binary_search(src[c].begin(), src[c].end(), j)) continue;
        Subset u = src[c];
        auto pos = std::lower_bound(u.begin(), u.end(), j) - u.begin();
        u.insert(u.begin() + pos, j);
        Int entry = pos % 2 ? Int(-a[j]) : a[j];
        mat(dst.at(u), c) += entry;
      }
    fc.maps.push_back(std::move(mat));
  }
  return fc;
}

std::vector<std::size_t> fiber_cohomology(const FiberComplex& fc, std::size_t ambient_rank) {
  const std::size_t d = fc.dim;
  std::vector<std::size_t> ranks(d);
  for (std::size_t p = 0; p < d; ++p) ranks[p] = rank(fc.maps[p]);
  std::vector<std::size_t> h(std::max(ambient_rank, d) + 1, 0);
  for (std::size_t p = 0; p <= d; ++p) {
    std::size_t v = binomial(d, p);
    if (p < d) v -= ranks[p];
    if (p > 0) v -= ranks[p - 1];
    h[p] = v;
  }
  return h;
}

std::vector<IntVec> FormModule::support_in_box(long box) const {
  std::vector<IntVec> out;
  for_each_box_point(x_.ambient_rank(), box, [&](const IntVec& m) {
    if (x_.in_support(m)) out.push_back(m);
  });
  std::sort(out.begin(), out.end());
  return out;
}

BettiTable FormModule::betti(std::optional<long> box, std::span<const Cone> pair_subfan,
                             unsigned threads) const {
  const std::size_t n = x_.ambient_rank();
  PairFilter keep(x_, pair_subfan);
  std::vector<IntVec> degrees;
  if (box) {
    for (auto& m : support_in_box(*box))
      if (keep(m)) degrees.push_back(std::move(m));
  } else {
    // alpha(m) = 0 only for m = 0; every other fiber is exact
    IntVec zero = zero_vector(n);
    if (keep(zero)) degrees.push_back(zero);
  }

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<std::size_t>(1, degrees.size()));
  std::vector<std::vector<std::size_t>> partial(threads, std::vector<std::size_t>(n + 1, 0));
  auto work = [&](unsigned t) {
    for (std::size_t i = t; i < degrees.size(); i += threads)
      partial[t] = add_dims(partial[t], fiber_cohomology(fiber_complex(degrees[i]), n));
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  BettiTable out{std::vector<std::size_t>(n + 1, 0), box};
  for (const auto& p : partial) out.dims = add_dims(out.dims, p);
  return out;
}

std::vector<PairDimsRow> FormModule::pair_dims(std::span<const Cone> subfan, std::size_t p,
                                               long box) const {
  PairFilter keep(x_, subfan);
  auto in_y = subfan_indices(x_.fan(), subfan);
  std::vector<PairDimsRow> rows;
  for (const auto& m : support_in_box(box)) {
    PairDimsRow r{m, 0, 0};
    if (keep(m)) r.lhs = binomial(fiber_space(m).dim(), p);
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (std::binary_search(in_y.begin(), in_y.end(), i)) continue;
      if (x_.fan()[i].relint_contains(m) && x_.monoid(i).contains(m))
        r.rhs += binomial(x_.monoid(i).group().rank(), p);
    }
    if (r.lhs != r.rhs)
      throw Error(ErrorKind::Internal, "boundary decomposition fails at " + format(m), m);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<DegreeDim> hdiff_general(const MonoidalComplex& x, std::size_t p, long box,
                                     std::optional<unsigned long> degree_bound) {
  FormModule fm(wn_complex(x, 0, degree_bound));
  std::vector<DegreeDim> out;
  for (const auto& m : fm.support_in_box(box))
    out.push_back({m, binomial(fm.fiber_space(m).dim(), p)});
  return out;
}

}  // namespace torf
