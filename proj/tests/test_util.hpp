// Bridges between the symbolic library and the brute-force matrix
// reference, plus seeded random generators for property tests.
#pragma once

#include <complex>
#include <random>
#include <vector>

#include "jw_oracle.hpp"
#include "susylat/algebra.hpp"

namespace test_util {

using susylat::gaussian_rational;
using susylat::mode_factor;
using susylat::monomial;
using susylat::op_kind;
using susylat::polynomial;
using susylat::rational;
using susylat::region;
using susylat::site;

inline jw_oracle::Space space_of(const region& r, int pad_lo = 0, int pad_hi = 0) {
  std::vector<std::vector<int>> sites;
  if (!r.empty() && r.begin()->x.size() == 1 && (pad_lo || pad_hi)) {
    int lo = r.begin()->x[0] - pad_lo, hi = r.rbegin()->x[0] + pad_hi;
    for (int x = lo; x <= hi; ++x) sites.push_back({x});
  } else {
    for (const site& s : r) sites.push_back(s.x);
  }
  return jw_oracle::Space(std::move(sites));
}

template <class S>
jw_oracle::RawPoly raw_of(const polynomial<S>& p) {
  jw_oracle::RawPoly out;
  for (const auto& [m, c] : p.terms) {
    jw_oracle::RawTerm t;
    t.coeff = susylat::scalar_ops<S>::to_complex(c);
    for (const mode_factor& f : m.f)
      t.factors.push_back(jw_oracle::RawFactor{f.s.x, f.kind == op_kind::create});
    out.push_back(std::move(t));
  }
  return out;
}

template <class S>
jw_oracle::Mat oracle_matrix(const jw_oracle::Space& sp, const polynomial<S>& p) {
  return jw_oracle::represent(sp, raw_of(p));
}

inline double matrix_distance(const jw_oracle::Mat& a, const jw_oracle::Mat& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

struct rng {
  std::mt19937_64 eng;
  explicit rng(std::uint64_t seed) : eng(seed) {}

  int uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(eng);
  }
  double real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng);
  }
  gaussian_rational coeff() {
    rational re(uniform(-3, 3), uniform(1, 3));
    rational im(uniform(-3, 3), uniform(1, 3));
    return {re, im};
  }
  mode_factor factor(const std::vector<site>& sites) {
    return mode_factor{uniform(0, 1) ? op_kind::annihilate : op_kind::create,
                       sites[static_cast<std::size_t>(uniform(0, static_cast<int>(sites.size()) - 1))]};
  }
  std::vector<mode_factor> word(const std::vector<site>& sites, int len) {
    std::vector<mode_factor> w;
    for (int i = 0; i < len; ++i) w.push_back(factor(sites));
    return w;
  }
  polynomial<gaussian_rational> poly(const std::vector<site>& sites, int terms, int max_len) {
    polynomial<gaussian_rational> p;
    for (int t = 0; t < terms; ++t)
      p += susylat::normalize(word(sites, uniform(0, max_len)), coeff());
    return p;
  }
};

inline std::vector<site> chain_sites(int lo, int hi) {
  std::vector<site> out;
  for (int x = lo; x <= hi; ++x) out.push_back(site{{x}});
  return out;
}

}  // namespace test_util
