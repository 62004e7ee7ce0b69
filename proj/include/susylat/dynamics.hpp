#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fock.hpp"

namespace susylat {

using cpoly = polynomial<std::complex<double>>;

inline charge_poly volume_charge(const charge_assignment& a, const region& lam,
                                 boundary_mode mode = boundary_mode::interior) {
  charge_poly q;
  auto pats =
      mode == boundary_mode::interior ? patterns_inside(a, lam) : patterns_meeting(a, lam);
  for (const charge_pattern& p : pats) q += p.value;
  return q;
}

// square of the hermitian window charge; commuting with it is exactly the
// overlapping-pair form of the finite-volume time generator, because
// disjoint pairs add up to vanishing anticommutators
inline charge_poly local_time_generator(const charge_assignment& a, const region& lam,
                                        boundary_mode mode = boundary_mode::interior) {
  auto [s1, s2] = symmetrize(a);
  charge_poly q = volume_charge(s1, lam, mode);
  return q * q;
}

inline region generator_domain(const charge_assignment& a, const region& lam,
                               const region& observable_support,
                               boundary_mode mode = boundary_mode::interior) {
  region dom = region_union(lam, observable_support);
  if (mode == boundary_mode::crossing)
    for (const charge_pattern& p : patterns_meeting(a, lam)) dom = region_union(dom, p.supp);
  return dom;
}

// basis of normal-ordered words over a fixed site set: two bits per site
// select whether the creator and the annihilator at that site are present
struct monomial_space {
  std::vector<site> sites;

  explicit monomial_space(const region& r) : sites(r.begin(), r.end()) {
    if (sites.size() > 12) throw std::length_error("word basis too large");
  }

  int count() const { return static_cast<int>(sites.size()); }
  std::int64_t dim() const { return std::int64_t(1) << (2 * count()); }

  std::int64_t encode(const monomial& m) const {
    std::int64_t idx = 0;
    for (const mode_factor& f : m.f) {
      auto it = std::lower_bound(sites.begin(), sites.end(), f.s);
      if (it == sites.end() || !(*it == f.s)) throw std::out_of_range("site not in word basis");
      int k = static_cast<int>(it - sites.begin());
      idx |= std::int64_t(f.kind == op_kind::create ? 2 : 1) << (2 * k);
    }
    return idx;
  }

  monomial decode(std::int64_t idx) const {
    monomial m;
    for (int k = 0; k < count(); ++k)
      if ((idx >> (2 * k)) & 2) m.f.push_back({op_kind::create, sites[k]});
    for (int k = 0; k < count(); ++k)
      if ((idx >> (2 * k)) & 1) m.f.push_back({op_kind::annihilate, sites[k]});
    return m;
  }
};

// matrix of A -> [O, A] on the word basis
inline sparse_matrix derivation_matrix(const monomial_space& ms, const cpoly& o) {
  std::vector<Eigen::Triplet<cplx>> trips;
  for (std::int64_t col = 0; col < ms.dim(); ++col) {
    cpoly unit_word;
    unit_word.terms[ms.decode(col)] = cplx(1);
    for (const auto& [m, c] : commutator(o, unit_word).terms)
      trips.emplace_back(static_cast<int>(ms.encode(m)), static_cast<int>(col), c);
  }
  sparse_matrix out(ms.dim(), ms.dim());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

inline state_vector to_vector(const monomial_space& ms, const cpoly& p) {
  state_vector v = state_vector::Zero(ms.dim());
  for (const auto& [m, c] : p.terms) v[ms.encode(m)] = c;
  return v;
}

inline cpoly from_vector(const monomial_space& ms, const state_vector& v) {
  cpoly p;
  for (std::int64_t k = 0; k < v.size(); ++k)
    if (v[k] != cplx(0)) p.terms[ms.decode(k)] = v[k];
  return p;
}

enum class series_engine { automatic, symbolic, matrix };

struct evolution_result {
  cpoly observable;
  double time = 0.0;
  int substeps = 0;
  int order_used = 0;
  double error_bound = 0.0;
  double requested_tol = 0.0;
  bool converged = false;
  double l1 = 0.0;
  region supp;
  series_engine engine_used = series_engine::symbolic;
  norm_data constants;
};

namespace detail {

// smallest truncation order making the geometric tail of the growth bound
// fit under the budget, everything handled in logarithms
inline int series_order(double log_prefactor, double log_q, double tol, int order_cap,
                        double& log_tail) {
  double budget = std::log(tol) + std::log1p(-std::exp(log_q)) - log_prefactor;
  int n = 0;
  if (budget < 0) n = std::min<double>(order_cap, std::ceil(budget / log_q - 1.0));
  n = std::max(n, 0);
  log_tail = log_prefactor + (n + 1) * log_q - std::log1p(-std::exp(log_q));
  return n;
}

inline double l1_of(const state_vector& v) { return v.lpNorm<1>(); }

}  // namespace detail

// truncated power series of the finite-volume dynamics applied to an
// observable, with a certified remainder: the step length is held at half
// the convergence time so the tail is geometric, and each step's tail is
// added to the running error budget
inline evolution_result lie_series_evolve(const charge_assignment& a, const region& lam,
                                          const cpoly& A, double t, double tol,
                                          boundary_mode mode = boundary_mode::interior,
                                          series_engine engine = series_engine::automatic,
                                          int order_cap = 256, int substep_cap = 4096) {
  evolution_result out;
  out.time = t;
  out.requested_tol = tol;
  auto [s1, s2] = symmetrize(a);
  out.constants = norm_constants(s1);
  const double step_limit = out.constants.series_time / 2.0;
  double steps_needed = std::ceil(std::abs(t) / step_limit);
  if (steps_needed > double(substep_cap))
    throw std::domain_error("requested time needs about " + std::to_string(steps_needed) +
                            " sub-steps; raise the cap or shorten the time");
  int steps = std::max(1, static_cast<int>(steps_needed));
  out.substeps = steps;
  double s = t / steps;
  double log_q = std::log(std::abs(s)) + out.constants.log_growth;
  if (t == 0.0) {
    out.observable = A;
    out.converged = true;
    out.l1 = l1_norm(A);
    out.supp = support(A);
    out.engine_used = engine == series_engine::matrix ? engine : series_engine::symbolic;
    return out;
  }

  region dom = generator_domain(a, lam, support(A), mode);
  if (engine == series_engine::automatic)
    engine = dom.size() <= 9 ? series_engine::matrix : series_engine::symbolic;
  out.engine_used = engine;
  cpoly o = to_numeric(local_time_generator(a, lam, mode));

  monomial_space ms(engine == series_engine::matrix ? dom : region{});
  sparse_matrix d;
  state_vector cur_vec;
  cpoly cur_poly;
  if (engine == series_engine::matrix) {
    d = derivation_matrix(ms, o);
    cur_vec = to_vector(ms, A);
  } else {
    cur_poly = A;
  }

  double accumulated = 0.0;
  for (int j = 0; j < steps; ++j) {
    double l1_cur =
        engine == series_engine::matrix ? detail::l1_of(cur_vec) : l1_norm(cur_poly);
    std::size_t supp_cur = engine == series_engine::matrix
                               ? support(from_vector(ms, cur_vec)).size()
                               : support(cur_poly).size();
    double log_pref = std::log(l1_cur + accumulated) +
                      4.0 * double(supp_cur) * out.constants.overlap_weight;
    double log_tail = 0.0;
    int n = detail::series_order(log_pref, log_q, tol / steps, order_cap, log_tail);
    out.order_used = std::max(out.order_used, n);
    accumulated += std::exp(log_tail);
    cplx is(0.0, s);
    if (engine == series_engine::matrix) {
      state_vector sum = cur_vec, g = cur_vec;
      for (int k = 1; k <= n; ++k) {
        g = (is / double(k)) * (d * g).eval();
        sum += g;
      }
      cur_vec = sum;
    } else {
      cpoly sum = cur_poly, g = cur_poly;
      for (int k = 1; k <= n; ++k) {
        g = (is / double(k)) * commutator(o, g);
        sum += g;
      }
      cur_poly = sum;
    }
  }
  out.error_bound = accumulated;
  out.converged = accumulated <= tol;
  out.observable = engine == series_engine::matrix ? from_vector(ms, cur_vec) : cur_poly;
  out.l1 = l1_norm(out.observable);
  out.supp = support(out.observable);
  return out;
}

template <class S>
polynomial<S> ad_power(const polynomial<S>& o, const polynomial<S>& A, int n) {
  polynomial<S> cur = A;
  for (int k = 0; k < n; ++k) cur = commutator(o, cur);
  return cur;
}

// norm of an exact polynomial: faithful representation when the support is
// small enough, coefficient sum (an upper bound) otherwise
inline double certified_norm(const charge_poly& p, bool& used_l1, int site_cap = 14) {
  region r = support(p);
  if (static_cast<int>(r.size()) <= site_cap) {
    used_l1 = false;
    return operator_norm(p);
  }
  used_l1 = true;
  return l1_norm(p);
}

// fixed-volume series with a tail certified by the window norm of the
// generator: two commutator factors per order give the geometric ratio
// 2 |t| |O|, and the factorial wins for every time
struct window_evolution {
  cpoly observable;
  double time = 0.0;
  int order_used = 0;
  double error_bound = 0.0;
  bool converged = false;
  double generator_norm = 0.0;
  bool norm_is_l1 = false;
  series_engine engine_used = series_engine::symbolic;
};

inline window_evolution window_evolve(const charge_assignment& a, const region& lam,
                                      const cpoly& A, double t, double tol,
                                      boundary_mode mode = boundary_mode::interior,
                                      series_engine engine = series_engine::automatic,
                                      int order_cap = 256) {
  window_evolution out;
  out.time = t;
  charge_poly o_exact = local_time_generator(a, lam, mode);
  out.generator_norm = certified_norm(o_exact, out.norm_is_l1);
  cpoly o = to_numeric(o_exact);

  double norm_a = l1_norm(A);
  double x = 2.0 * std::abs(t) * out.generator_norm;
  // smallest order whose remainder norm_a sum_{k>n} x^k/k! passes tol,
  // bounded by the geometric closure lead / (1 - x/(n+2)) valid once n+2 > x
  int n = std::min(order_cap, static_cast<int>(std::ceil(x)));
  double lead = norm_a;  // norm_a x^(n+1) / (n+1)!
  for (int k = 1; k <= n + 1; ++k) lead *= x / k;
  auto closure = [&](int nn, double ld) { return ld / (1.0 - x / (nn + 2.0)); };
  while (n < order_cap && closure(n, lead) > tol) {
    ++n;
    lead *= x / (n + 1);
  }
  out.order_used = n;
  out.error_bound = x < n + 2 ? closure(n, lead) : std::numeric_limits<double>::infinity();
  out.converged = out.error_bound <= tol;
  if (t == 0.0 || n == 0) {
    out.observable = A;
    return out;
  }

  region dom = generator_domain(a, lam, support(A), mode);
  if (engine == series_engine::automatic)
    engine = dom.size() <= 9 ? series_engine::matrix : series_engine::symbolic;
  out.engine_used = engine;
  cplx is(0.0, t);
  if (engine == series_engine::matrix) {
    monomial_space ms(dom);
    sparse_matrix d = derivation_matrix(ms, o);
    state_vector sum = to_vector(ms, A), g = sum;
    for (int k = 1; k <= n; ++k) {
      g = (is / double(k)) * (d * g).eval();
      sum += g;
    }
    out.observable = from_vector(ms, sum);
  } else {
    cpoly sum = A, g = A;
    for (int k = 1; k <= n; ++k) {
      g = (is / double(k)) * commutator(o, g);
      sum += g;
    }
    out.observable = sum;
  }
  return out;
}

struct residual_entry {
  int halo = 0;
  std::vector<bool> order_exact;
  std::vector<double> order_norm;
  double weighted = 0.0;
  bool norms_are_l1 = false;
  bool exact_zero = false;
};

struct residual_ladder {
  std::vector<residual_entry> entries;
  std::vector<std::size_t> reference_terms;  // term counts of the full-system iterates
  int stabilization_halo = -1;
  bool non_increasing = true;
};

// compare the finite-volume iterates of the time generator against the
// full-system ones over a ladder of halos around the observable; once the
// halo passes twice the iterated range, every order must agree exactly
inline residual_ladder commutation_residual(const charge_assignment& a, const charge_poly& A,
                                            double t, int orders,
                                            const std::vector<int>& halos,
                                            boundary_mode mode = boundary_mode::interior) {
  residual_ladder out;
  std::vector<charge_poly> reference(orders + 1);
  reference[0] = A;
  for (int n = 1; n <= orders; ++n) reference[n] = apply_delta0(a, reference[n - 1]);
  for (const charge_poly& rp : reference) out.reference_terms.push_back(rp.size());

  double prev = std::numeric_limits<double>::infinity();
  for (int k : halos) {
    residual_entry e;
    e.halo = k;
    region lam = enlarge(support(A), k);
    charge_poly o = local_time_generator(a, lam, mode);
    charge_poly cur = A;
    e.exact_zero = true;
    double logfact = 0.0;
    for (int n = 1; n <= orders; ++n) {
      cur = commutator(o, cur);
      charge_poly resid = cur - reference[n];
      bool zero = resid.is_zero();
      e.order_exact.push_back(zero);
      e.exact_zero = e.exact_zero && zero;
      logfact += std::log(double(n));
      if (zero) {
        e.order_norm.push_back(0.0);
      } else {
        bool l1 = false;
        double nv = certified_norm(resid, l1);
        e.norms_are_l1 = e.norms_are_l1 || l1;
        e.order_norm.push_back(nv);
        e.weighted += std::exp(n * std::log(std::abs(t)) - logfact) * nv;
      }
    }
    if (e.weighted > prev * (1.0 + 1e-12)) out.non_increasing = false;
    prev = e.weighted;
    if (e.exact_zero && out.stabilization_halo < 0) out.stabilization_halo = k;
    out.entries.push_back(e);
  }
  return out;
}

struct growth_check {
  int order = 0;
  double log_lhs = 0.0;  // log of ||iterate|| / n!
  double log_rhs = 0.0;  // log of ||A|| e^(4 |I| L) M^n
  bool holds = false;
  bool l1_route = false;
};

// the iterated generator grows at most like n! M^n times a volume factor;
// verified in logarithms since the right side overflows any float
inline std::vector<growth_check> check_growth_bound(const charge_assignment& a,
                                                    const region& lam, const charge_poly& A,
                                                    int orders,
                                                    boundary_mode mode = boundary_mode::interior) {
  std::vector<growth_check> out;
  auto [s1, s2] = symmetrize(a);
  norm_data nd = norm_constants(s1);
  bool l1a = false;
  double norm_a = certified_norm(A, l1a);
  double base = std::log(norm_a) + 4.0 * double(support(A).size()) * nd.overlap_weight;
  charge_poly o = local_time_generator(a, lam, mode);
  charge_poly cur = A;
  double logfact = 0.0;
  for (int n = 1; n <= orders; ++n) {
    cur = commutator(o, cur);
    logfact += std::log(double(n));
    growth_check g;
    g.order = n;
    double nv = certified_norm(cur, g.l1_route);
    g.log_lhs = (nv > 0 ? std::log(nv) : -std::numeric_limits<double>::infinity()) - logfact;
    g.log_rhs = base + n * nd.log_growth;
    g.holds = g.log_lhs <= g.log_rhs;
    out.push_back(g);
  }
  return out;
}

}  // namespace susylat
