#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"

namespace susylat {

using charge_poly = polynomial<gaussian_rational>;

// one local supercharge: an odd element attached to a finite region
struct charge_pattern {
  region supp;
  charge_poly value;
};

// finite-range assignment of local supercharges, generated from a
// fundamental list of patterns by periodic lattice translation;
// a zero period on an axis means no translation along it
struct charge_assignment {
  std::string name;
  int dimension = 1;
  std::vector<int> period;
  int range = 0;
  std::vector<charge_pattern> patterns;
};

inline std::vector<std::string> validate(const charge_assignment& a) {
  std::vector<std::string> issues;
  if (a.dimension < 1) issues.push_back("dimension must be at least 1");
  if (a.range < 0) issues.push_back("range must be non-negative");
  if (static_cast<int>(a.period.size()) != a.dimension)
    issues.push_back("period vector length must equal dimension");
  double body_bound = std::pow(static_cast<double>(std::max(a.range, 1)), a.dimension);
  for (std::size_t k = 0; k < a.patterns.size(); ++k) {
    const charge_pattern& p = a.patterns[k];
    std::string tag = "pattern " + std::to_string(k) + ": ";
    for (const site& s : p.supp)
      if (static_cast<int>(s.x.size()) != a.dimension)
        issues.push_back(tag + "site dimension mismatch");
    auto par = p.value.homogeneous_parity();
    if (p.value.is_zero())
      issues.push_back(tag + "zero polynomial");
    else if (!par || *par != 1)
      issues.push_back(tag + "polynomial must be odd");
    if (!contains(p.supp, support(p.value)))
      issues.push_back(tag + "polynomial escapes its declared region");
    if (diameter(p.supp) > a.range)
      issues.push_back(tag + "region diameter exceeds declared range");
    if (static_cast<double>(p.supp.size()) > body_bound)
      issues.push_back(tag + "region has more than range^dimension sites");
  }
  return issues;
}

namespace detail {

inline void axis_shift_bounds(int pat_lo, int pat_hi, int reg_lo, int reg_hi, int period,
                              long& n_lo, long& n_hi) {
  if (period <= 0) {
    n_lo = 0, n_hi = 0;
    return;
  }
  // need pat + n*period to overlap [reg_lo, reg_hi]
  n_lo = static_cast<long>(std::floor(double(reg_lo - pat_hi) / period));
  n_hi = static_cast<long>(std::ceil(double(reg_hi - pat_lo) / period));
}

}  // namespace detail

// all translates of the fundamental patterns whose support meets I
inline std::vector<charge_pattern> patterns_meeting(const charge_assignment& a, const region& I) {
  std::vector<charge_pattern> out;
  if (I.empty()) return out;
  int nu = a.dimension;
  std::vector<int> reg_lo(nu), reg_hi(nu);
  for (int d = 0; d < nu; ++d) {
    reg_lo[d] = I.begin()->x[d];
    reg_hi[d] = I.begin()->x[d];
  }
  for (const site& s : I)
    for (int d = 0; d < nu; ++d) {
      reg_lo[d] = std::min(reg_lo[d], s.x[d]);
      reg_hi[d] = std::max(reg_hi[d], s.x[d]);
    }
  for (const charge_pattern& p : a.patterns) {
    if (p.supp.empty()) continue;
    std::vector<int> pat_lo(nu), pat_hi(nu);
    for (int d = 0; d < nu; ++d) {
      pat_lo[d] = p.supp.begin()->x[d];
      pat_hi[d] = p.supp.begin()->x[d];
    }
    for (const site& s : p.supp)
      for (int d = 0; d < nu; ++d) {
        pat_lo[d] = std::min(pat_lo[d], s.x[d]);
        pat_hi[d] = std::max(pat_hi[d], s.x[d]);
      }
    std::vector<long> n_lo(nu), n_hi(nu), n(nu);
    for (int d = 0; d < nu; ++d) {
      detail::axis_shift_bounds(pat_lo[d], pat_hi[d], reg_lo[d], reg_hi[d],
                                d < static_cast<int>(a.period.size()) ? a.period[d] : 0,
                                n_lo[d], n_hi[d]);
      n[d] = n_lo[d];
    }
    for (;;) {
      std::vector<int> by(nu);
      for (int d = 0; d < nu; ++d)
        by[d] = static_cast<int>(n[d] * (d < static_cast<int>(a.period.size()) ? a.period[d] : 0));
      region supp = shifted(p.supp, by);
      if (intersects(supp, I))
        out.push_back(charge_pattern{std::move(supp), translated(p.value, by)});
      int d = 0;
      while (d < nu && n[d] == n_hi[d]) {
        n[d] = n_lo[d];
        ++d;
      }
      if (d == nu) break;
      ++n[d];
    }
  }
  return out;
}

// all translates lying entirely inside Lambda
inline std::vector<charge_pattern> patterns_inside(const charge_assignment& a, const region& lam) {
  std::vector<charge_pattern> out;
  for (charge_pattern& p : patterns_meeting(a, lam))
    if (contains(lam, p.supp)) out.push_back(std::move(p));
  return out;
}

// C_Psi(I): sum of all local charges meeting I
inline charge_poly local_charge(const charge_assignment& a, const region& I) {
  charge_poly out;
  for (const charge_pattern& p : patterns_meeting(a, I)) out += p.value;
  return out;
}

inline charge_assignment conjugate_assignment(const charge_assignment& a) {
  charge_assignment out = a;
  for (charge_pattern& p : out.patterns) p.value = adjoint(p.value);
  return out;
}

// hermitian combinations Psi + Psi* and i(Psi - Psi*)
inline std::pair<charge_assignment, charge_assignment> symmetrize(const charge_assignment& a) {
  charge_assignment s1 = a, s2 = a;
  for (std::size_t k = 0; k < a.patterns.size(); ++k) {
    const charge_poly& v = a.patterns[k].value;
    charge_poly vd = adjoint(v);
    s1.patterns[k].value = v + vd;
    s2.patterns[k].value = gaussian_rational::i() * (v - vd);
  }
  return {std::move(s1), std::move(s2)};
}

// delta(A) = [C_Psi(supp A), A]_gamma; patterns disjoint from the support
// drop out, so any enlargement of the charge region gives the same value
template <class S>
polynomial<S> apply_delta(const charge_assignment& a, const polynomial<S>& A) {
  region I = support(A);
  if (I.empty()) return {};
  polynomial<S> q;
  for (const charge_pattern& p : patterns_meeting(a, I)) {
    if constexpr (std::is_same_v<S, gaussian_rational>)
      q += p.value;
    else
      q += to_numeric(p.value);
  }
  return graded_commutator(q, A);
}

template <class S>
polynomial<S> apply_delta_star(const charge_assignment& a, const polynomial<S>& A) {
  return apply_delta(conjugate_assignment(a), A);
}

// ordered pairs of overlapping charges relevant to a set of sites:
// X2 and X1 intersect and their union meets I
inline std::vector<std::pair<const charge_pattern*, const charge_pattern*>> overlapping_pairs(
    const std::vector<charge_pattern>& candidates, const region& I) {
  std::vector<std::pair<const charge_pattern*, const charge_pattern*>> out;
  for (const charge_pattern& x2 : candidates)
    for (const charge_pattern& x1 : candidates) {
      if (!intersects(x2.supp, x1.supp)) continue;
      if (!intersects(x2.supp, I) && !intersects(x1.supp, I)) continue;
      out.emplace_back(&x2, &x1);
    }
  return out;
}

// delta(delta(A)) through the overlapping-pair identity: the double
// superderivation collapses to an ordinary commutator with the products
// Psi(X2)Psi(X1) over intersecting pairs
template <class S>
polynomial<S> double_delta_pairwise(const charge_assignment& a, const polynomial<S>& A) {
  region I = support(A);
  if (I.empty()) return {};
  auto candidates = patterns_meeting(a, enlarge(I, 2 * a.range));
  polynomial<S> op;
  for (auto [x2, x1] : overlapping_pairs(candidates, I)) {
    charge_poly prod = x2->value * x1->value;
    if constexpr (std::is_same_v<S, gaussian_rational>)
      op += prod;
    else
      op += to_numeric(prod);
  }
  return commutator(op, A);
}

struct nilpotency_result {
  bool nilpotent = true;
  bool routes_agree = true;
  std::vector<std::pair<charge_poly, charge_poly>> checked;  // generator, delta^2
  std::optional<std::pair<charge_poly, charge_poly>> counterexample;
};

// generator sites covering the given number of fundamental periods
inline std::vector<site> generator_sites(const charge_assignment& a, int periods) {
  region base;
  for (const charge_pattern& p : a.patterns) base.insert(p.supp.begin(), p.supp.end());
  region cell;
  for (const site& s : base) {
    site t = s;
    for (int d = 0; d < a.dimension; ++d) {
      int p = d < static_cast<int>(a.period.size()) ? a.period[d] : 0;
      if (p > 0) t.x[d] = ((t.x[d] % p) + p) % p;
    }
    cell.insert(t);
  }
  region out;
  std::vector<int> reps(a.dimension, 1);
  for (int d = 0; d < a.dimension; ++d)
    if (d < static_cast<int>(a.period.size()) && a.period[d] > 0) reps[d] = periods;
  std::vector<int> n(a.dimension, 0);
  for (;;) {
    std::vector<int> by(a.dimension, 0);
    for (int d = 0; d < a.dimension; ++d)
      by[d] = n[d] * (d < static_cast<int>(a.period.size()) ? a.period[d] : 0);
    for (const site& s : cell) out.insert(shifted(s, by));
    int d = 0;
    while (d < a.dimension && n[d] == reps[d] - 1) n[d++] = 0;
    if (d == a.dimension) break;
    ++n[d];
  }
  return {out.begin(), out.end()};
}

// exact nilpotency verdict: delta^2 is an ordinary derivation, so
// vanishing on the generators of a periodic window settles it
inline nilpotency_result check_nilpotent(const charge_assignment& a, int periods = 1) {
  nilpotency_result res;
  for (const site& s : generator_sites(a, periods)) {
    for (op_kind k : {op_kind::annihilate, op_kind::create}) {
      charge_poly g = charge_poly::generator(s, k);
      charge_poly twice = apply_delta(a, apply_delta(a, g));
      charge_poly paired = double_delta_pairwise(a, g);
      if (!(twice == paired)) res.routes_agree = false;
      res.checked.emplace_back(g, twice);
      if (!twice.is_zero()) {
        res.nilpotent = false;
        if (!res.counterexample) res.counterexample = {g, twice};
      }
    }
  }
  return res;
}

enum class delta0_route { composed, squared_s1, pairwise };

// delta0(A) = delta* delta(A) + delta delta*(A), the SUSY time generator
template <class S>
polynomial<S> apply_delta0(const charge_assignment& a, const polynomial<S>& A,
                           delta0_route route = delta0_route::pairwise) {
  switch (route) {
    case delta0_route::composed: {
      charge_assignment ad = conjugate_assignment(a);
      return apply_delta(ad, apply_delta(a, A)) + apply_delta(a, apply_delta(ad, A));
    }
    case delta0_route::squared_s1: {
      auto [s1, s2] = symmetrize(a);
      return apply_delta(s1, apply_delta(s1, A));
    }
    case delta0_route::pairwise:
    default: {
      auto [s1, s2] = symmetrize(a);
      return double_delta_pairwise(s1, A);
    }
  }
}

}  // namespace susylat
