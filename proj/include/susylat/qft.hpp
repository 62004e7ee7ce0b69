#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fock.hpp"

namespace susylat::qft {

using susylat::cplx;
using susylat::dense_matrix;
using susylat::state_vector;

// real function sampled on a uniform grid, the carrier of all smearing
// data; transforms use the normalization f^(p) = 2^(1/4) (2 pi)^(-1/2)
// Integral f(x) e^(-ipx) dx
struct grid_function {
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<double> v;

  int size() const { return static_cast<int>(v.size()); }
  double x_at(int j) const { return x0 + j * dx; }

  static grid_function gaussian(int n, double x0, double dx, double center, double width) {
    grid_function f{x0, dx, std::vector<double>(n)};
    for (int j = 0; j < n; ++j) {
      double u = (f.x_at(j) - center) / width;
      f.v[j] = std::exp(-0.5 * u * u);
    }
    return f;
  }

  // odd partner of the gaussian, giving a genuinely complex transform
  static grid_function wave(int n, double x0, double dx, double center, double width) {
    grid_function f{x0, dx, std::vector<double>(n)};
    for (int j = 0; j < n; ++j) {
      double u = (f.x_at(j) - center) / width;
      f.v[j] = u * std::exp(-0.5 * u * u);
    }
    return f;
  }

  // circular shift by an integer number of cells
  grid_function translated(int cells) const {
    grid_function out = *this;
    int n = size();
    int m = ((cells % n) + n) % n;
    for (int j = 0; j < n; ++j) out.v[(j + m) % n] = v[j];
    return out;
  }

  double inner(const grid_function& g) const {
    double s = 0.0;
    for (int j = 0; j < size(); ++j) s += v[j] * g.v[j];
    return s * dx;
  }

  cplx fourier(double p) const {
    cplx s = 0.0;
    for (int j = 0; j < size(); ++j) s += v[j] * std::exp(cplx(0.0, -p * x_at(j)));
    return std::pow(2.0, 0.25) / std::sqrt(2.0 * std::numbers::pi) * dx * s;
  }

  // transform on the conjugate grid p_k = 2 pi k / (n dx), k = 0..n/2
  std::vector<cplx> spectrum() const;

  grid_function derivative_fd8() const {
    static const double w[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    int n = size();
    grid_function out = *this;
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 1; k <= 4; ++k)
        s += w[k - 1] * (v[(j + k) % n] - v[(j - k + 8 * n) % n]);
      out.v[j] = s / dx;
    }
    return out;
  }

  grid_function derivative_spectral() const;
};

namespace detail {

// radix-2 transform, enough for power-of-two grids
inline void fft(std::vector<cplx>& a, bool inverse) {
  int n = static_cast<int>(a.size());
  if (n & (n - 1)) throw std::invalid_argument("grid size must be a power of two");
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * std::numbers::pi / len * (inverse ? 1.0 : -1.0);
    cplx wl(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      cplx w(1.0);
      for (int j = 0; j < len / 2; ++j) {
        cplx u = a[i + j], t = w * a[i + j + len / 2];
        a[i + j] = u + t;
        a[i + j + len / 2] = u - t;
        w *= wl;
      }
    }
  }
  if (inverse)
    for (cplx& z : a) z /= double(n);
}

}  // namespace detail

inline std::vector<cplx> grid_function::spectrum() const {
  int n = size();
  std::vector<cplx> a(v.begin(), v.end());
  detail::fft(a, false);
  double scale = std::pow(2.0, 0.25) / std::sqrt(2.0 * std::numbers::pi) * dx;
  std::vector<cplx> out(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) {
    double p = 2.0 * std::numbers::pi * k / (n * dx);
    out[k] = scale * std::exp(cplx(0.0, -p * x0)) * a[k];
  }
  return out;
}

inline grid_function grid_function::derivative_spectral() const {
  int n = size();
  std::vector<cplx> a(v.begin(), v.end());
  detail::fft(a, false);
  for (int k = 0; k < n; ++k) {
    int kk = k <= n / 2 ? k : k - n;
    double p = 2.0 * std::numbers::pi * kk / (n * dx);
    a[k] *= cplx(0.0, p);
    if (k == n / 2) a[k] = 0.0;  // drop the unmatched mode
  }
  detail::fft(a, true);
  grid_function out = *this;
  for (int j = 0; j < n; ++j) out.v[j] = std::real(a[j]);
  return out;
}

struct pairing_data {
  cplx fer{};   // Integral_0^inf f^(p) conj(g^(p)) dp
  cplx bos{};   // Integral_0^inf p f^(p) conj(g^(p)) dp
  double sigma = 0.0;  // Integral f g' dx
  double fer_refinement = 0.0;  // change when halving the grid
  double bos_refinement = 0.0;
};

// trapezoid sums over the conjugate grid; the refinement fields compare
// against the same sum on every second sample
inline pairing_data compute_pairings(const grid_function& f, const grid_function& g) {
  pairing_data out;
  auto fs = f.spectrum(), gs = g.spectrum();
  int m = static_cast<int>(fs.size()) - 1;
  double dp = 2.0 * std::numbers::pi / (f.size() * f.dx);
  cplx fer = 0.0, bos = 0.0, fer2 = 0.0, bos2 = 0.0;
  for (int k = 0; k <= m; ++k) {
    double wgt = (k == 0 || k == m) ? 0.5 : 1.0;
    double p = dp * k;
    cplx term = fs[k] * std::conj(gs[k]);
    fer += wgt * term;
    bos += wgt * p * term;
    if (k % 2 == 0) {
      double w2 = (k == 0 || k == m) ? 0.5 : 1.0;
      fer2 += w2 * term;
      bos2 += w2 * p * term;
    }
  }
  out.fer = fer * dp;
  out.bos = bos * dp;
  out.fer_refinement = std::abs(out.fer - fer2 * 2.0 * dp);
  out.bos_refinement = std::abs(out.bos - bos2 * 2.0 * dp);
  out.sigma = f.inner(g.derivative_fd8());
  return out;
}

// fermion and truncated boson modes at momenta k dp, k = 1..modes; the
// charge pairs each fermion mode with its boson partner
struct qft_space {
  int modes = 1;
  int cap = 1;       // highest kept boson occupation
  double dp = 1.0;
  std::int64_t dim = 0;
  std::vector<double> momentum;
  std::vector<dense_matrix> b, d;  // annihilators per mode
  dense_matrix qs, h, grading;
  state_vector vacuum;

  dense_matrix smeared_fermion(const grid_function& f) const {
    dense_matrix out = dense_matrix::Zero(dim, dim);
    for (int k = 0; k < modes; ++k) {
      cplx mk = std::sqrt(dp) * f.fourier(momentum[k]);
      out += mk * b[k] + std::conj(mk) * b[k].adjoint();
    }
    return out;
  }

  dense_matrix smeared_boson(const grid_function& g) const {
    dense_matrix out = dense_matrix::Zero(dim, dim);
    for (int k = 0; k < modes; ++k) {
      cplx nk = std::sqrt(dp * momentum[k]) * g.fourier(momentum[k]);
      out += nk * d[k] + std::conj(nk) * d[k].adjoint();
    }
    return out;
  }

  // the same smearing with each mode coefficient rotated by the free
  // one-particle phase
  dense_matrix smeared_fermion_at_time(const grid_function& f, double t) const {
    dense_matrix out = dense_matrix::Zero(dim, dim);
    for (int k = 0; k < modes; ++k) {
      cplx mk = std::sqrt(dp) * f.fourier(momentum[k]) * std::exp(cplx(0.0, -momentum[k] * t));
      out += mk * b[k] + std::conj(mk) * b[k].adjoint();
    }
    return out;
  }

  dense_matrix resolvent(double lambda, const grid_function& g) const {
    dense_matrix a = cplx(0.0, lambda) * dense_matrix::Identity(dim, dim) - smeared_boson(g);
    return a.partialPivLu().solve(dense_matrix::Identity(dim, dim));
  }

  dense_matrix superderivation(const dense_matrix& x) const {
    return qs * x - grading * x * grading * qs;
  }

  dense_matrix evolve(const dense_matrix& x, double t) const {
    // h is diagonal in the number basis, so the phases are immediate
    state_vector ph(dim);
    for (std::int64_t i = 0; i < dim; ++i) ph[i] = std::exp(cplx(0.0, t * std::real(h(i, i))));
    return ph.asDiagonal() * x * ph.conjugate().asDiagonal();
  }

  // kills every component touching the highest boson level
  dense_matrix below_shell_projector() const;
};

inline qft_space build_space(int modes, int cap, double dp) {
  qft_space s;
  s.modes = modes;
  s.cap = cap;
  s.dp = dp;
  int fdim = 1 << modes;
  int levels = cap + 1;
  std::int64_t bdim = 1;
  for (int k = 0; k < modes; ++k) bdim *= levels;
  s.dim = fdim * bdim;
  if (s.dim > 4096) throw std::length_error("mode space too large");
  for (int k = 1; k <= modes; ++k) s.momentum.push_back(k * dp);

  auto kron = [](const dense_matrix& a, const dense_matrix& b) {
    dense_matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j)
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  };
  dense_matrix f2 = dense_matrix::Identity(2, 2);
  dense_matrix z = (dense_matrix(2, 2) << 1, 0, 0, -1).finished();
  dense_matrix lower = (dense_matrix(2, 2) << 0, 1, 0, 0).finished();
  dense_matrix bId = dense_matrix::Identity(bdim, bdim);
  dense_matrix ladder = dense_matrix::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) ladder(n - 1, n) = std::sqrt(double(n));

  for (int k = 0; k < modes; ++k) {
    dense_matrix bf = dense_matrix::Identity(1, 1);
    for (int j = 0; j < modes; ++j) bf = kron(bf, j < k ? z : (j == k ? lower : f2));
    s.b.push_back(kron(bf, bId));
    dense_matrix db = dense_matrix::Identity(1, 1);
    for (int j = 0; j < modes; ++j)
      db = kron(db, j == k ? ladder : dense_matrix::Identity(levels, levels));
    s.d.push_back(kron(dense_matrix::Identity(fdim, fdim), db));
  }

  s.qs = dense_matrix::Zero(s.dim, s.dim);
  s.h = dense_matrix::Zero(s.dim, s.dim);
  for (int k = 0; k < modes; ++k) {
    s.qs += std::sqrt(s.momentum[k]) *
            (s.b[k].adjoint() * s.d[k] + s.d[k].adjoint() * s.b[k]);
    s.h += s.momentum[k] *
           (s.b[k].adjoint() * s.b[k] + s.d[k].adjoint() * s.d[k]);
  }
  dense_matrix fpar = dense_matrix::Identity(1, 1);
  for (int j = 0; j < modes; ++j) fpar = kron(fpar, z);
  s.grading = kron(fpar, bId);
  s.vacuum = state_vector::Unit(s.dim, 0);
  // the empty state sits at index 0 for both factors: check the energies
  if (std::abs(s.h(0, 0)) > 1e-14) throw std::logic_error("vacuum index mismatch");
  return s;
}

inline dense_matrix qft_space::below_shell_projector() const {
  int levels = cap + 1;
  std::int64_t bdim = 1;
  for (int k = 0; k < modes; ++k) bdim *= levels;
  dense_matrix out = dense_matrix::Zero(dim, dim);
  for (std::int64_t i = 0; i < dim; ++i) {
    std::int64_t bi = i % bdim;
    bool ok = true;
    for (int k = 0; k < modes; ++k) {
      if (bi % levels == cap) ok = false;
      bi /= levels;
    }
    if (ok) out(i, i) = 1.0;
  }
  return out;
}

inline double max_abs(const dense_matrix& m) { return m.cwiseAbs().maxCoeff(); }

struct resolvent_report {
  double definition = 0.0;      // (i lambda - j) R - 1
  double identity = 0.0;        // R(lambda) - R(mu) vs i (mu - lambda) R R
  double adjointness = 0.0;     // R(lambda)^* - R(-lambda)
  double smearing = 0.0;        // R_f - R_g vs R_f (j(f) - j(g)) R_g
  double norm_excess = 0.0;     // max(0, |R| - 1/|lambda|)
  double ccr = 0.0;             // [R_f, R_g] vs sigma~ R_f R_g^2 R_f
  double ccr_on_vacuum = 0.0;   // the same difference applied to the vacuum
  cplx realized_sigma{};        // scalar of [j(f), j(g)] on the kept modes
};

inline resolvent_report check_resolvent_relations(const qft_space& s, const grid_function& f,
                                                  const grid_function& g, double lambda,
                                                  double mu) {
  resolvent_report r;
  dense_matrix jf = s.smeared_boson(f), jg = s.smeared_boson(g);
  dense_matrix id = dense_matrix::Identity(s.dim, s.dim);
  dense_matrix rf = s.resolvent(lambda, f), rg = s.resolvent(lambda, g);
  dense_matrix rfmu = s.resolvent(mu, f);
  r.definition = max_abs((cplx(0.0, lambda) * id - jf) * rf - id);
  r.identity = max_abs(rf - rfmu - cplx(0.0, mu - lambda) * rf * rfmu);
  r.adjointness = max_abs(rf.adjoint() - s.resolvent(-lambda, f));
  r.smearing = max_abs(rf - rg - rf * (jf - jg) * rg);
  Eigen::JacobiSVD<dense_matrix> svd(rf);
  r.norm_excess = std::max(0.0, svd.singularValues()(0) - 1.0 / std::abs(lambda));
  cplx sig = 0.0;
  for (int k = 0; k < s.modes; ++k) {
    cplx nf = std::sqrt(s.dp * s.momentum[k]) * f.fourier(s.momentum[k]);
    cplx ng = std::sqrt(s.dp * s.momentum[k]) * g.fourier(s.momentum[k]);
    sig += nf * std::conj(ng) - std::conj(nf) * ng;
  }
  r.realized_sigma = sig;  // equals i times a real number
  dense_matrix gap = rf * rg - rg * rf - sig * rf * rg * rg * rf;
  r.ccr = max_abs(gap);
  r.ccr_on_vacuum = (gap * s.vacuum).norm();
  return r;
}

struct stein_report {
  double minus_residual = 0.0;   // operator gap to j(f) R - i c(f) R c(g') R
  double plus_residual = 0.0;    // operator gap to the opposite sign
  double minus_on_vacuum = 0.0;  // the same gaps applied to the vacuum; the
  double plus_on_vacuum = 0.0;   // cap suppresses only the vector route
  double phi_minus = 0.0;        // vacuum functional on the minus formula
  double phi_plus = 0.0;
  double phi_abstract = 0.0;     // vacuum functional on the true derivation
};

// Leibniz for the superderivation on zeta = c(f) R(lambda, g): the charge
// sends j(g) to i c(g'), and the resolvent responds with a sandwiched
// correction carrying a minus sign from the odd grading of c(f).  The raw
// operator gaps are dominated by the occupation cap for either sign; the
// vacuum routes separate them, since the cap error reaches the vacuum
// only through every boson level at once.
inline stein_report superderivation_case2(const qft_space& s, const grid_function& f,
                                          const grid_function& g, double lambda) {
  stein_report out;
  grid_function gp = g.derivative_spectral();
  dense_matrix r = s.resolvent(lambda, g);
  dense_matrix cf = s.smeared_fermion(f), jf = s.smeared_boson(f);
  dense_matrix cgp = s.smeared_fermion(gp);
  dense_matrix zeta = cf * r;
  dense_matrix lhs = s.superderivation(zeta);
  dense_matrix sandwich = cplx(0.0, 1.0) * cf * r * cgp * r;
  dense_matrix minus = jf * r - sandwich;
  dense_matrix plus = jf * r + sandwich;
  out.minus_residual = max_abs(lhs - minus);
  out.plus_residual = max_abs(lhs - plus);
  out.minus_on_vacuum = ((lhs - minus) * s.vacuum).norm();
  out.plus_on_vacuum = ((lhs - plus) * s.vacuum).norm();
  auto vac = [&](const dense_matrix& x) {
    return std::abs(cplx(s.vacuum.dot(x * s.vacuum)));
  };
  out.phi_minus = vac(minus);
  out.phi_plus = vac(plus);
  out.phi_abstract = vac(lhs);
  return out;
}

struct mollifier_report {
  std::vector<double> lambdas;
  std::vector<double> residuals;  // |(i lambda R(lambda,f) - 1) B| on the state
  std::vector<double> bounds;     // (1/lambda) |j(f) B vacuum|
  bool strictly_decreasing = true;
  bool within_bound = true;
};

// i lambda R(lambda, f) tends to the identity; tested against a bounded
// probe B with the exact rate |j(f) B vacuum| / lambda
inline mollifier_report mollifier_convergence(const qft_space& s, const grid_function& f,
                                              const std::vector<double>& lambdas,
                                              const dense_matrix& probe) {
  mollifier_report out;
  out.lambdas = lambdas;
  dense_matrix jf = s.smeared_boson(f);
  dense_matrix id = dense_matrix::Identity(s.dim, s.dim);
  state_vector bv = probe * s.vacuum;
  double rate = (jf * bv).norm();
  double prev = std::numeric_limits<double>::infinity();
  for (double lam : lambdas) {
    dense_matrix moll = cplx(0.0, lam) * s.resolvent(lam, f) - id;
    double res = (moll * bv).norm();
    out.residuals.push_back(res);
    out.bounds.push_back(rate / lam);
    out.strictly_decreasing = out.strictly_decreasing && res < prev;
    out.within_bound = out.within_bound && res <= rate / lam * (1.0 + 1e-9);
    prev = res;
  }
  return out;
}

struct mollified_derivation_report {
  std::vector<double> lambdas;
  std::vector<double> values;  // |superderivation(c(f) R(lambda, f)) vacuum|
  std::vector<double> bounds;  // (1/lambda) sqrt(Integral (f')^2 / 2)
  std::vector<double> slacks;  // excess over the gradient bound, if any
  double gradient_rate = 0.0;
  bool strictly_decreasing = true;
};

// the derivation of the mollified field stays bounded and dies at the
// gradient rate as the mollifier sharpens
inline mollified_derivation_report check_mollified_derivation(const qft_space& s,
                                                              const grid_function& f,
                                                              const std::vector<double>& lambdas) {
  mollified_derivation_report out;
  out.lambdas = lambdas;
  grid_function fp = f.derivative_fd8();
  out.gradient_rate = std::sqrt(0.5 * fp.inner(fp));
  dense_matrix cf = s.smeared_fermion(f);
  double prev = std::numeric_limits<double>::infinity();
  for (double lam : lambdas) {
    dense_matrix n = cf * s.resolvent(lam, f);
    double val = (s.superderivation(n) * s.vacuum).norm();
    out.values.push_back(val);
    out.bounds.push_back(out.gradient_rate / lam);
    out.slacks.push_back(std::max(0.0, val - out.gradient_rate / lam));
    out.strictly_decreasing = out.strictly_decreasing && val < prev;
    prev = val;
  }
  return out;
}

struct wick_report {
  cplx fer_of_f_gprime{};  // fer(f, g') with the difference-quotient derivative
  cplx bos_of_f_g{};       // bos(f, g) on the conjugate grid
  double wick_residual = 0.0;  // |fer(f, g') + i bos(f, g)|
  cplx two_point_fermion{};    // vacuum value of c(f) c(g)
  cplx two_point_boson{};      // vacuum value of j(f) j(g)
  cplx mode_fer{};             // mode sum for the fermion pair
  cplx mode_bos{};             // mode sum for the boson pair
  double fermion_match = 0.0;
  double boson_match = 0.0;
};

// the two-point functions of the paired state against their momentum
// integrals, plus the derivative identity linking the two kernels
inline wick_report susy_state_wick_check(const qft_space& s, const grid_function& f,
                                         const grid_function& g) {
  wick_report out;
  pairing_data pcross = compute_pairings(f, g.derivative_fd8());
  pairing_data pfg = compute_pairings(f, g);
  out.fer_of_f_gprime = pcross.fer;
  out.bos_of_f_g = pfg.bos;
  out.wick_residual = std::abs(pcross.fer + cplx(0.0, 1.0) * pfg.bos);

  dense_matrix cf = s.smeared_fermion(f), cg = s.smeared_fermion(g);
  dense_matrix jf = s.smeared_boson(f), jg = s.smeared_boson(g);
  out.two_point_fermion = s.vacuum.dot(cf * cg * s.vacuum);
  out.two_point_boson = s.vacuum.dot(jf * jg * s.vacuum);
  cplx mf = 0.0, mb = 0.0;
  for (int k = 0; k < s.modes; ++k) {
    double p = s.momentum[k];
    mf += s.dp * f.fourier(p) * std::conj(g.fourier(p));
    mb += s.dp * p * f.fourier(p) * std::conj(g.fourier(p));
  }
  out.mode_fer = mf;
  out.mode_bos = mb;
  out.fermion_match = std::abs(out.two_point_fermion - mf);
  out.boson_match = std::abs(out.two_point_boson - mb);
  return out;
}

}  // namespace susylat::qft
