// measurement run for the continuum module: grid transforms, pairing
// integrals, resolvent relations, superderivation sign, mollifier rates
#include <chrono>
#include <cstdio>

#include <susylat/qft.hpp>

using namespace susylat;
using namespace susylat::qft;

int main() {
  const int G = 4096;
  const double dx = 0.02;
  const double x0 = -0.5 * G * dx;
  grid_function f = grid_function::gaussian(G, x0, dx, 0.0, 1.0);
  grid_function g = grid_function::gaussian(G, x0, dx, 0.4, 1.2);
  grid_function fn = grid_function::gaussian(G, x0, dx, 0.0, 0.5);
  grid_function w = grid_function::wave(G, x0, dx, -0.3, 0.9);

  // transform sanity: quadrature vs fft bins, gaussian closed form
  auto fs = f.spectrum();
  double worst = 0.0;
  for (int k : {0, 1, 7, 100, 511}) {
    double p = 2.0 * std::numbers::pi * k / (G * dx);
    worst = std::max(worst, std::abs(fs[k] - f.fourier(p)));
  }
  std::printf("fft-vs-quadrature max |diff| = %.3e\n", worst);
  double p1 = 1.0;
  cplx exact = std::pow(2.0, 0.25) * std::exp(-0.5 * p1 * p1);
  std::printf("gaussian fourier at p=1: %.12f + %.1ei  (closed form %.12f)\n",
              std::real(f.fourier(p1)), std::imag(f.fourier(p1)), std::real(exact));

  // derivative routes
  grid_function d1 = f.derivative_fd8(), d2 = f.derivative_spectral();
  double dmax = 0.0;
  for (int j = 0; j < G; ++j) dmax = std::max(dmax, std::abs(d1.v[j] - d2.v[j]));
  std::printf("fd8 vs spectral derivative max |diff| = %.3e\n", dmax);

  // pairings and the derivative identity
  pairing_data pfg = compute_pairings(f, g);
  pairing_data pcross = compute_pairings(f, g.derivative_fd8());
  std::printf("fer(f,g) = %.12f %+.12fi  refinement %.3e\n", std::real(pfg.fer),
              std::imag(pfg.fer), pfg.fer_refinement);
  std::printf("bos(f,g) = %.12f %+.12fi  refinement %.3e\n", std::real(pfg.bos),
              std::imag(pfg.bos), pfg.bos_refinement);
  std::printf("sigma(f,g) = %.12f   sigma(f,f) = %.3e\n", pfg.sigma,
              compute_pairings(f, f).sigma);
  std::printf("wick residual |fer(f,g')+i bos(f,g)| = %.3e\n",
              std::abs(pcross.fer + cplx(0.0, 1.0) * pfg.bos));
  pairing_data pff = compute_pairings(f, f);
  double l2 = f.inner(f);
  std::printf("2 fer(f,f) = %.12f   sqrt2*(f,f) = %.12f\n", 2.0 * std::real(pff.fer),
              std::sqrt(2.0) * l2);

  // smallest space
  qft_space tiny = build_space(1, 1, 1.0);
  std::printf("dim(N=1,M=1) = %lld\n", static_cast<long long>(tiny.dim));
  std::printf("|Qs vacuum| = %.3e   |Qs - Qs^*| = %.3e\n",
              (tiny.qs * tiny.vacuum).norm(), max_abs(tiny.qs - tiny.qs.adjoint()));

  // h vs qs^2 below the shell
  qft_space s18 = build_space(1, 8, 0.9);
  dense_matrix pr = s18.below_shell_projector();
  std::printf("|P(qs^2-h)P| = %.3e   |qs^2-h| = %.3e\n",
              max_abs(pr * (s18.qs * s18.qs - s18.h) * pr), max_abs(s18.qs * s18.qs - s18.h));

  // resolvent relations at N=1 across M
  for (int M : {2, 4, 8}) {
    qft_space s = build_space(1, M, 0.9);
    resolvent_report r = check_resolvent_relations(s, f, g, 1.3, -0.7);
    std::printf("M=%d  def %.2e ident %.2e adj %.2e smear %.2e norm+ %.2e ccr %.6e ccrvac %.6e\n",
                M, r.definition, r.identity, r.adjointness, r.smearing, r.norm_excess, r.ccr,
                r.ccr_on_vacuum);
  }

  // superderivation sign across M and two lambdas
  for (double lam : {1.5, 3.0}) {
    for (int M : {2, 4, 8}) {
      qft_space s = build_space(1, M, 0.9);
      stein_report st = superderivation_case2(s, f, g, lam);
      std::printf(
          "lam=%.1f M=%d  op(m) %.3e op(p) %.3e vac(m) %.6e vac(p) %.6e phiM %.2e phiP %.2e phiA %.1e\n",
          lam, M, st.minus_residual, st.plus_residual, st.minus_on_vacuum, st.plus_on_vacuum,
          st.phi_minus, st.phi_plus, st.phi_abstract);
    }
  }
  for (double lam : {2.0, 3.0, 4.0}) {
    auto t0 = std::chrono::steady_clock::now();
    qft_space s24 = build_space(2, 4, 0.8);
    stein_report st = superderivation_case2(s24, f, g, lam);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    std::printf("N=2 M=4 lam=%.0f dim=%lld (%lld ms)  vac(m) %.3e vac(p) %.3e phiM %.3e phiP %.3e\n",
                lam, static_cast<long long>(s24.dim), static_cast<long long>(ms),
                st.minus_on_vacuum, st.plus_on_vacuum, st.phi_minus, st.phi_plus);
  }
  {
    qft_space s24 = build_space(2, 4, 0.8);
    wick_report wk = susy_state_wick_check(s24, f, g);
    std::printf("two-point fermion match %.2e boson match %.2e wick %.2e\n",
                wk.fermion_match, wk.boson_match, wk.wick_residual);
  }

  // mollifier rates: vacuum probe with the gradient bound, then a resolvent probe
  {
    qft_space s = build_space(1, 8, 0.9);
    dense_matrix id = dense_matrix::Identity(s.dim, s.dim);
    std::vector<double> lams = {1.0, 10.0, 100.0};
    for (const grid_function* ff : {&f, &fn}) {
      mollifier_report mr = mollifier_convergence(s, *ff, lams, id);
      grid_function fp = ff->derivative_fd8();
      double grad = std::sqrt(0.5 * fp.inner(fp));
      std::printf("mollifier width=%.1f: res {%.6e %.6e %.6e} sharp {%.3e %.3e %.3e} grad-rate %.4f\n",
                  ff == &f ? 1.0 : 0.5, mr.residuals[0], mr.residuals[1], mr.residuals[2],
                  mr.bounds[0], mr.bounds[1], mr.bounds[2], grad);
      std::printf("  decreasing=%d sharp-bound=%d grad-bound per lam: %d %d %d\n",
                  mr.strictly_decreasing, mr.within_bound, mr.residuals[0] <= grad / 1.0,
                  mr.residuals[1] <= grad / 10.0, mr.residuals[2] <= grad / 100.0);
      dense_matrix probe = s.resolvent(2.0, g);
      mollifier_report mb = mollifier_convergence(s, *ff, lams, probe);
      std::printf("  resolvent probe: res {%.3e %.3e %.3e} decreasing=%d bound=%d\n",
                  mb.residuals[0], mb.residuals[1], mb.residuals[2], mb.strictly_decreasing,
                  mb.within_bound);
    }
  }

  // derivation of the mollified field
  {
    qft_space s = build_space(1, 8, 0.9);
    std::vector<double> lams = {1.0, 10.0, 100.0};
    for (const grid_function* ff : {&f, &fn}) {
      mollified_derivation_report md = check_mollified_derivation(s, *ff, lams);
      std::printf("mollified derivation width=%.1f: val {%.6e %.6e %.6e} rate %.4f slack {%.2e %.2e %.2e} dec=%d\n",
                  ff == &f ? 1.0 : 0.5, md.values[0], md.values[1], md.values[2],
                  md.gradient_rate, md.slacks[0], md.slacks[1], md.slacks[2],
                  md.strictly_decreasing);
    }
  }

  // free phase covariance
  {
    qft_space s = build_space(2, 3, 0.8);
    dense_matrix cf = s.smeared_fermion(f);
    for (double t : {0.3, 1.0, 25 * 0.02}) {
      double r = max_abs(s.evolve(cf, t) - s.smeared_fermion_at_time(f, t));
      std::printf("phase covariance t=%.2f residual %.3e\n", t, r);
    }
    double tr = max_abs(s.smeared_fermion(f.translated(25)) - s.smeared_fermion_at_time(f, 25 * 0.02));
    std::printf("translate-by-25-cells vs phase residual %.3e\n", tr);
    dense_matrix cw = s.smeared_fermion(w);
    std::printf("odd-function phase residual t=0.7: %.3e\n",
                max_abs(s.evolve(cw, 0.7) - s.smeared_fermion_at_time(w, 0.7)));
  }
  return 0;
}
