#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "charge.hpp"

namespace susylat {

using cplx = std::complex<double>;
using dense_matrix = Eigen::MatrixXcd;
using sparse_matrix = Eigen::SparseMatrix<cplx>;
using state_vector = Eigen::VectorXcd;

// occupation-number representation on a finite set of sites; site k of n
// (in ascending order) owns bit n-1-k of the basis index, the vacuum is
// index 0, and an operator on site k picks up the sign of the occupation
// to its left
struct fock_space {
  std::vector<site> sites;

  explicit fock_space(const region& r) : sites(r.begin(), r.end()) {
    if (sites.size() > 24) throw std::length_error("representation too large");
  }

  int count() const { return static_cast<int>(sites.size()); }
  std::int64_t dim() const { return std::int64_t(1) << count(); }
  std::int64_t vacuum_index() const { return 0; }
  std::int64_t filled_index() const { return dim() - 1; }

  int position(const site& s) const {
    auto it = std::lower_bound(sites.begin(), sites.end(), s);
    if (it == sites.end() || !(*it == s)) throw std::out_of_range("site not represented");
    return static_cast<int>(it - sites.begin());
  }

  bool occupied(std::int64_t index, int k) const { return (index >> (count() - 1 - k)) & 1; }

  int basis_parity(std::int64_t index) const {
    return std::popcount(static_cast<std::uint64_t>(index)) & 1;
  }
};

// act with a normal-ordered word on a basis state, rightmost factor first;
// empty result encodes zero
inline std::optional<std::pair<std::int64_t, int>> apply_word(const fock_space& sp,
                                                              const monomial& m,
                                                              std::int64_t index) {
  int n = sp.count();
  int sign = 1;
  for (auto it = m.f.rbegin(); it != m.f.rend(); ++it) {
    int k = sp.position(it->s);
    std::int64_t bit = std::int64_t(1) << (n - 1 - k);
    bool occ = index & bit;
    if ((it->kind == op_kind::annihilate) != occ) return std::nullopt;
    std::uint64_t before = static_cast<std::uint64_t>(index) >> (n - k);
    if (std::popcount(before) & 1) sign = -sign;
    index ^= bit;
  }
  return std::make_pair(index, sign);
}

template <class S>
sparse_matrix represent(const fock_space& sp, const polynomial<S>& p) {
  std::vector<Eigen::Triplet<cplx>> trips;
  for (std::int64_t col = 0; col < sp.dim(); ++col)
    for (const auto& [m, c] : p.terms)
      if (auto hit = apply_word(sp, m, col))
        trips.emplace_back(static_cast<int>(hit->first), static_cast<int>(col),
                           scalar_ops<S>::to_complex(c) * double(hit->second));
  sparse_matrix out(sp.dim(), sp.dim());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

template <class S>
state_vector apply(const fock_space& sp, const polynomial<S>& p, const state_vector& v) {
  state_vector out = state_vector::Zero(sp.dim());
  for (std::int64_t col = 0; col < sp.dim(); ++col) {
    if (v[col] == cplx(0)) continue;
    for (const auto& [m, c] : p.terms)
      if (auto hit = apply_word(sp, m, col))
        out[hit->first] += scalar_ops<S>::to_complex(c) * double(hit->second) * v[col];
  }
  return out;
}

inline sparse_matrix parity_matrix(const fock_space& sp) {
  std::vector<Eigen::Triplet<cplx>> trips;
  for (std::int64_t i = 0; i < sp.dim(); ++i)
    trips.emplace_back(static_cast<int>(i), static_cast<int>(i),
                       sp.basis_parity(i) ? cplx(-1) : cplx(1));
  sparse_matrix out(sp.dim(), sp.dim());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

inline state_vector basis_state(const fock_space& sp, std::int64_t index) {
  state_vector v = state_vector::Zero(sp.dim());
  v[index] = 1.0;
  return v;
}

// largest singular value; exact dense solve for small spaces, otherwise a
// deterministic power iteration on m* m (a lower bound that converges from
// below)
inline double operator_norm(const sparse_matrix& m, std::int64_t dense_limit = 1024) {
  if (m.rows() == 0) return 0.0;
  if (m.rows() <= dense_limit) {
    dense_matrix d = dense_matrix(m);
    dense_matrix g = d.adjoint() * d;
    Eigen::SelfAdjointEigenSolver<dense_matrix> es(g, Eigen::EigenvaluesOnly);
    double top = es.eigenvalues().maxCoeff();
    return top > 0 ? std::sqrt(top) : 0.0;
  }
  sparse_matrix ma = sparse_matrix(m.adjoint());
  std::mt19937_64 eng(0x5eed);
  std::normal_distribution<double> gauss;
  state_vector v(m.rows());
  for (std::int64_t i = 0; i < m.rows(); ++i) v[i] = cplx(gauss(eng), gauss(eng));
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 300; ++it) {
    state_vector w = ma * (m * v);
    double next = std::real(v.dot(w));
    double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    if (it > 10 && std::abs(next - lambda) <= 1e-13 * std::max(1.0, std::abs(next))) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda > 0 ? std::sqrt(lambda) : 0.0;
}

template <class S>
double operator_norm(const polynomial<S>& p) {
  region r = support(p);
  if (r.empty()) {
    auto it = p.terms.find(monomial{});
    return it == p.terms.end() ? 0.0 : std::abs(scalar_ops<S>::to_complex(it->second));
  }
  fock_space sp(r);
  return operator_norm(represent(sp, p), 4096);
}

// growth data for the iterated time generator: a bound w on the pattern
// norms, the overlap weight L, and the resulting series constants
struct norm_data {
  double pattern_norm = 0.0;  // largest single-pattern norm
  double overlap_weight = 0.0;  // L
  double log_growth = 0.0;      // log M = 8 r^nu L
  double growth = 1.0;          // M
  double series_time = 1.0;     // t0 = 1/M
};

inline norm_data norm_constants(const charge_assignment& a) {
  norm_data out;
  auto cell = generator_sites(a, 1);
  for (const site& i : cell) {
    double sum = 0.0;
    for (const charge_pattern& x : patterns_meeting(a, region{i})) {
      double nx = operator_norm(x.value);
      out.pattern_norm = std::max(out.pattern_norm, nx);
      double inner = 0.0;
      for (const charge_pattern& y : patterns_meeting(a, x.supp))
        inner += operator_norm(y.value);
      sum += nx * inner;
    }
    out.overlap_weight = std::max(out.overlap_weight, sum);
  }
  out.log_growth = 8.0 * std::pow(double(std::max(a.range, 1)), a.dimension) * out.overlap_weight;
  out.growth = std::exp(out.log_growth);
  out.series_time = std::exp(-out.log_growth);
  return out;
}

enum class boundary_mode { interior, crossing };

// the finite-volume supercharge and its relatives, represented on the
// smallest space carrying every selected pattern
struct susy_system {
  region volume;
  region domain;
  fock_space space;
  charge_poly q_poly;
  sparse_matrix q, q_dag, qs1, qs2, h, parity;
  std::size_t pattern_count = 0;

  susy_system(const charge_assignment& a, const region& lam,
              boundary_mode mode = boundary_mode::interior)
      : volume(lam), domain(lam), space((init_domain(a, lam, mode), domain)) {
    auto pats = mode == boundary_mode::interior ? patterns_inside(a, lam)
                                                : patterns_meeting(a, lam);
    pattern_count = pats.size();
    for (const charge_pattern& p : pats) q_poly += p.value;
    q = represent(space, q_poly);
    q_dag = sparse_matrix(q.adjoint());
    cplx im(0, 1);
    qs1 = q + q_dag;
    qs2 = im * q - im * q_dag;
    h = qs1 * qs1;
    parity = parity_matrix(space);
  }

 private:
  void init_domain(const charge_assignment& a, const region& lam, boundary_mode mode) {
    domain = lam;
    if (mode == boundary_mode::crossing)
      for (const charge_pattern& p : patterns_meeting(a, lam))
        domain = region_union(domain, p.supp);
  }
};

struct doublet_entry {
  double value = 0.0;
  int even = 0;
  int odd = 0;
  bool paired = false;
};

struct spectral_data {
  std::vector<double> eigenvalues;
  std::vector<double> even_eigenvalues, odd_eigenvalues;
  int kernel_dim_even = 0, kernel_dim_odd = 0;
  int witten_index = 0;
  double h_norm = 0.0;
  double kernel_tolerance = 0.0;
  std::vector<doublet_entry> doublets;
  bool all_paired = true;
};

namespace detail {

inline std::vector<std::int64_t> parity_sector(const fock_space& sp, int parity) {
  std::vector<std::int64_t> idx;
  for (std::int64_t i = 0; i < sp.dim(); ++i)
    if (sp.basis_parity(i) == parity) idx.push_back(i);
  return idx;
}

inline dense_matrix restrict_to(const sparse_matrix& m, const std::vector<std::int64_t>& idx) {
  std::vector<int> where(m.rows(), -1);
  for (std::size_t k = 0; k < idx.size(); ++k) where[idx[k]] = static_cast<int>(k);
  dense_matrix out = dense_matrix::Zero(idx.size(), idx.size());
  for (int k = 0; k < m.outerSize(); ++k)
    for (sparse_matrix::InnerIterator it(m, k); it; ++it) {
      int r = where[it.row()], c = where[it.col()];
      if (r >= 0 && c >= 0) out(r, c) = it.value();
    }
  return out;
}

}  // namespace detail

// full spectrum split by parity; the time generator is block diagonal, so
// each sector gets its own dense solve
inline spectral_data spectral_report(const susy_system& sys, double kernel_rtol = 1e-10,
                                     double doublet_tol = 1e-8) {
  if (sys.space.dim() > 4096)
    throw std::length_error("full spectrum needs a space of at most 2^12 states");
  spectral_data out;
  std::vector<std::vector<double>> sector(2);
  for (int par = 0; par < 2; ++par) {
    auto idx = detail::parity_sector(sys.space, par);
    if (idx.empty()) continue;
    dense_matrix hp = detail::restrict_to(sys.h, idx);
    Eigen::SelfAdjointEigenSolver<dense_matrix> es(hp, Eigen::EigenvaluesOnly);
    for (int k = 0; k < es.eigenvalues().size(); ++k) sector[par].push_back(es.eigenvalues()[k]);
  }
  out.even_eigenvalues = sector[0];
  out.odd_eigenvalues = sector[1];
  out.eigenvalues = sector[0];
  out.eigenvalues.insert(out.eigenvalues.end(), sector[1].begin(), sector[1].end());
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  out.h_norm = out.eigenvalues.empty()
                   ? 0.0
                   : std::max(std::abs(out.eigenvalues.front()), std::abs(out.eigenvalues.back()));
  out.kernel_tolerance = kernel_rtol * std::max(out.h_norm, 1.0);
  for (double v : sector[0])
    if (std::abs(v) <= out.kernel_tolerance) ++out.kernel_dim_even;
  for (double v : sector[1])
    if (std::abs(v) <= out.kernel_tolerance) ++out.kernel_dim_odd;
  out.witten_index = out.kernel_dim_even - out.kernel_dim_odd;

  // cluster the strictly positive part of the spectrum and demand equal
  // multiplicity in both sectors
  std::vector<std::pair<double, int>> pos;  // value, parity
  for (int par = 0; par < 2; ++par)
    for (double v : sector[par])
      if (std::abs(v) > out.kernel_tolerance) pos.emplace_back(v, par);
  std::sort(pos.begin(), pos.end());
  double scale = std::max(out.h_norm, 1.0);
  for (std::size_t k = 0; k < pos.size();) {
    doublet_entry d;
    d.value = pos[k].first;
    std::size_t j = k;
    while (j < pos.size() && pos[j].first - pos[k].first <= doublet_tol * scale) {
      (pos[j].second == 0 ? d.even : d.odd)++;
      ++j;
    }
    d.paired = d.even == d.odd;
    out.all_paired = out.all_paired && d.paired;
    out.doublets.push_back(d);
    k = j;
  }
  return out;
}

// orthonormal basis of the numerical kernel of the time generator
inline dense_matrix kernel_basis(const susy_system& sys, double kernel_rtol = 1e-10) {
  dense_matrix h = dense_matrix(sys.h);
  Eigen::SelfAdjointEigenSolver<dense_matrix> es(h);
  double scale = std::max({std::abs(es.eigenvalues().minCoeff()),
                           std::abs(es.eigenvalues().maxCoeff()), 1.0});
  std::vector<int> keep;
  for (int k = 0; k < es.eigenvalues().size(); ++k)
    if (std::abs(es.eigenvalues()[k]) <= kernel_rtol * scale) keep.push_back(k);
  dense_matrix out(h.rows(), keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) out.col(k) = es.eigenvectors().col(keep[k]);
  return out;
}

// expectation of a normal-ordered polynomial in the empty state: only the
// scalar part survives
inline gaussian_rational vacuum_expectation(const charge_poly& p) {
  auto it = p.terms.find(monomial{});
  return it == p.terms.end() ? gaussian_rational() : it->second;
}

// expectation in the fully occupied state, evaluated exactly through the
// occupation representation on the support of each word
inline gaussian_rational filled_expectation(const charge_poly& p) {
  gaussian_rational out;
  for (const auto& [m, c] : p.terms) {
    if (m.is_unit()) {
      out += c;
      continue;
    }
    region r;
    for (const mode_factor& f : m.f) r.insert(f.s);
    fock_space sp(r);
    auto hit = apply_word(sp, m, sp.filled_index());
    if (hit && hit->first == sp.filled_index())
      out += gaussian_rational(hit->second) * c;
  }
  return out;
}

struct state_verdict {
  double q_residual = 0.0;      // |Q w|
  double q_dag_residual = 0.0;  // |Q* w|
  bool invariant = false;
  cplx phi_delta{};  // <w, delta(A) w> for the probe observable
};

// a vector state is supersymmetric when both the charge and its adjoint
// kill it; the functional applied to delta(A) is then reported as evidence
template <class S>
state_verdict verify_state_susy(const susy_system& sys, const polynomial<S>& A,
                                const state_vector& w, double tol = 1e-10) {
  state_verdict out;
  state_vector qw = sys.q * w;
  state_vector qdw = sys.q_dag * w;
  out.q_residual = qw.norm();
  out.q_dag_residual = qdw.norm();
  out.invariant = out.q_residual <= tol && out.q_dag_residual <= tol;
  state_vector aw = apply(sys.space, A, w);
  state_vector gadw = apply(sys.space, adjoint(gamma(A)), w);
  out.phi_delta = qdw.dot(aw) - gadw.dot(qw);
  return out;
}

// the finite-volume superderivation must match conjugation by the
// represented charge once every pattern meeting the volume is carried;
// reports the largest residual over the supplied observables
inline std::map<std::string, double> structural_identities(
    const charge_assignment& a, const region& lam, const std::vector<charge_poly>& probes) {
  susy_system sys(a, lam, boundary_mode::crossing);
  auto [s1, s2] = symmetrize(a);
  dense_matrix qd = dense_matrix(sys.q), q_dagd = dense_matrix(sys.q_dag);
  dense_matrix qs1d = dense_matrix(sys.qs1), qs2d = dense_matrix(sys.qs2);
  dense_matrix hd = dense_matrix(sys.h), gd = dense_matrix(sys.parity);
  std::map<std::string, double> res;
  auto track = [&res](const std::string& key, double v) {
    auto [it, fresh] = res.emplace(key, v);
    if (!fresh) it->second = std::max(it->second, v);
  };
  for (const charge_poly& A : probes) {
    dense_matrix Ad = dense_matrix(represent(sys.space, A));
    dense_matrix gAd = dense_matrix(represent(sys.space, gamma(A)));
    auto conj = [&](const dense_matrix& Qm) { return Qm * Ad - gAd * Qm; };
    track("delta", (dense_matrix(represent(sys.space, apply_delta(a, A))) - conj(qd))
                       .cwiseAbs().maxCoeff());
    track("delta_star",
          (dense_matrix(represent(sys.space, apply_delta_star(a, A))) - conj(q_dagd))
              .cwiseAbs().maxCoeff());
    track("delta_s1", (dense_matrix(represent(sys.space, apply_delta(s1, A))) - conj(qs1d))
                          .cwiseAbs().maxCoeff());
    track("delta_s2", (dense_matrix(represent(sys.space, apply_delta(s2, A))) - conj(qs2d))
                          .cwiseAbs().maxCoeff());
  }
  track("parity_odd_charge", (gd * qd * gd + qd).cwiseAbs().maxCoeff());
  track("charge_offdiagonal",
        (((dense_matrix::Identity(gd.rows(), gd.cols()) + gd) / 2) * qd *
         ((dense_matrix::Identity(gd.rows(), gd.cols()) + gd) / 2))
            .cwiseAbs().maxCoeff());
  track("h_commutes_charge", (hd * qs1d - qs1d * hd).cwiseAbs().maxCoeff());
  track("h_parity_even", (gd * hd * gd - hd).cwiseAbs().maxCoeff());

  // the grading survives the dynamics generated by the time generator
  Eigen::SelfAdjointEigenSolver<dense_matrix> es(hd);
  const double t = 0.7;
  dense_matrix phases = (cplx(0, t) * es.eigenvalues().array().cast<cplx>()).exp().matrix().asDiagonal();
  dense_matrix ut = es.eigenvectors() * phases * es.eigenvectors().adjoint();
  dense_matrix evolved_parity = ut * gd * ut.adjoint();
  track("parity_time_invariant", (evolved_parity - gd).cwiseAbs().maxCoeff());
  dense_matrix evolved_charge = ut * qs1d * ut.adjoint();
  track("evolved_charge_odd", (gd * evolved_charge * gd + evolved_charge).cwiseAbs().maxCoeff());
  return res;
}

struct face_check_data {
  int ensembles = 0;
  int components = 0;
  double max_residual = 0.0;       // energy residual over all clean components
  bool face_holds = false;
  double contaminated_residual = 0.0;  // largest residual once a mixture is polluted
  bool contamination_flagged = false;
};

// decompositions of a zero-energy density matrix stay at zero energy; a
// polluted mixture must expose at least one energetic component
inline face_check_data check_face_property(const susy_system& sys, int ensembles = 25,
                                           double eps = 0.05, double tol = 1e-10,
                                           std::uint64_t seed = 99) {
  face_check_data out;
  dense_matrix K = kernel_basis(sys);
  if (K.cols() == 0) return out;
  dense_matrix h = dense_matrix(sys.h);
  double hnorm = operator_norm(sys.h, 4096);
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  auto haar = [&](int n) {
    dense_matrix g(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) g(r, c) = cplx(gauss(eng), gauss(eng));
    Eigen::HouseholderQR<dense_matrix> qr(g);
    dense_matrix qm = qr.householderQ() * dense_matrix::Identity(n, n);
    return qm;
  };
  int kd = static_cast<int>(K.cols());
  out.ensembles = ensembles;
  double worst = 0.0;
  for (int e = 0; e < ensembles; ++e) {
    int m = 2 + static_cast<int>(eng() % std::uint64_t(kd));
    // a random zero-energy density matrix with m pure pieces
    dense_matrix C = K * haar(kd).leftCols(std::min(m, kd));
    int pieces = static_cast<int>(C.cols());
    std::vector<double> lam(pieces);
    double tot = 0.0;
    for (double& l : lam) tot += (l = unif(eng));
    for (double& l : lam) l /= tot;
    // mix the pieces into a fresh decomposition of the same matrix
    int mprime = pieces + 1 + static_cast<int>(eng() % 3);
    dense_matrix U = haar(mprime);
    for (int j = 0; j < mprime; ++j) {
      state_vector wj = state_vector::Zero(h.rows());
      for (int k = 0; k < pieces; ++k) wj += U(j, k) * std::sqrt(lam[k]) * C.col(k);
      double nw = wj.norm();
      if (nw < 1e-12) continue;
      wj /= nw;
      worst = std::max(worst, (h * wj).norm() / std::max(hnorm, 1.0));
      ++out.components;
    }
  }
  out.max_residual = worst;
  out.face_holds = worst <= tol;

  // pollute one mixture with an energetic vector and look again
  Eigen::SelfAdjointEigenSolver<dense_matrix> es(h);
  int top = static_cast<int>(es.eigenvalues().size()) - 1;
  state_vector z = es.eigenvectors().col(top);
  state_vector v0 = K.col(0);
  double contaminated = 0.0;
  dense_matrix U = haar(3);
  for (int j = 0; j < 3; ++j) {
    state_vector wj = U(j, 0) * std::sqrt(1.0 - eps) * v0 + U(j, 1) * std::sqrt(eps) * z;
    double nw = wj.norm();
    if (nw < 1e-12) continue;
    wj /= nw;
    contaminated = std::max(contaminated, (h * wj).norm() / std::max(hnorm, 1.0));
  }
  out.contaminated_residual = contaminated;
  out.contamination_flagged = contaminated > tol;
  return out;
}

struct affiliation_data {
  double commutant_residual = 0.0;  // [Q (+) Q, commutant] over the basis
  bool affiliated = false;
  double control_residual = 0.0;  // same bracket for a one-sided impostor
  bool control_detected = false;
};

// two copies of the same representation: the commutant of the doubled
// algebra is spanned by the four block units with scalar blocks, and the
// doubled charge must commute with each of them; a charge acting on only
// one copy fails the same bracket
inline affiliation_data check_affiliation(const susy_system& sys) {
  affiliation_data out;
  dense_matrix q = dense_matrix(sys.q);
  std::int64_t d = q.rows();
  dense_matrix dbl = dense_matrix::Zero(2 * d, 2 * d);
  dbl.topLeftCorner(d, d) = q;
  dbl.bottomRightCorner(d, d) = q;
  dense_matrix oneside = dense_matrix::Zero(2 * d, 2 * d);
  oneside.topLeftCorner(d, d) = q;
  dense_matrix id = dense_matrix::Identity(d, d);
  for (int bi = 0; bi < 2; ++bi)
    for (int bj = 0; bj < 2; ++bj) {
      dense_matrix unit = dense_matrix::Zero(2 * d, 2 * d);
      unit.block(bi * d, bj * d, d, d) = id;
      out.commutant_residual = std::max(
          out.commutant_residual, (dbl * unit - unit * dbl).cwiseAbs().maxCoeff());
      out.control_residual = std::max(
          out.control_residual, (oneside * unit - unit * oneside).cwiseAbs().maxCoeff());
    }
  out.affiliated = out.commutant_residual <= 1e-12;
  out.control_detected = out.control_residual > 1e-3;
  return out;
}

inline void write_matrix_market(std::ostream& os, const sparse_matrix& m) {
  os << "%%MatrixMarket matrix coordinate complex general\n";
  os << m.rows() << " " << m.cols() << " " << m.nonZeros() << "\n";
  for (int k = 0; k < m.outerSize(); ++k)
    for (sparse_matrix::InnerIterator it(m, k); it; ++it)
      os << it.row() + 1 << " " << it.col() + 1 << " " << std::real(it.value()) << " "
         << std::imag(it.value()) << "\n";
}

}  // namespace susylat
