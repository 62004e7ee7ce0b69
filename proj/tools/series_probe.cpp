// survey of the dynamics layer: growth of the exact iterates of the time
// generator, the halo where the finite-volume iterates stop changing, and
// timings for the word-basis engine; prints the values frozen into tests
#include <chrono>
#include <cstdio>

#include <susylat/dynamics.hpp>

using namespace susylat;

namespace {

site at(int i) { return site{{i}}; }

charge_assignment chain_assignment() {
  charge_assignment a;
  a.name = "chain";
  a.dimension = 1;
  a.period = {2};
  a.range = 3;
  charge_poly v = charge_poly::annihilator(at(1)) * charge_poly::creator(at(0)) *
                  charge_poly::annihilator(at(-1));
  a.patterns.push_back({interval(-1, 1), std::move(v)});
  return a;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  charge_assignment a = chain_assignment();
  charge_poly a0 = charge_poly::annihilator(at(0));

  std::printf("== full-system iterates of delta0 on a(0) ==\n");
  charge_poly cur = a0;
  for (int n = 1; n <= 4; ++n) {
    auto t0 = std::chrono::steady_clock::now();
    cur = apply_delta0(a, cur);
    region s = support(cur);
    std::printf("n=%d terms=%zu supp=[%d,%d] |supp|=%zu  %.0f ms\n", n, cur.size(),
                s.empty() ? 0 : s.begin()->x[0], s.empty() ? 0 : s.rbegin()->x[0], s.size(),
                ms_since(t0));
    std::fflush(stdout);
  }

  std::printf("== finite-volume ladder, orders 1..4 ==\n");
  for (int k : {0, 3, 6, 9, 12, 15, 18, 21, 24, 27}) {
    auto t0 = std::chrono::steady_clock::now();
    region lam = enlarge(support(a0), k);
    charge_poly o = local_time_generator(a, lam);
    charge_poly b = a0;
    std::printf("k=%-2d o_terms=%zu :", k, o.size());
    for (int n = 1; n <= 4; ++n) {
      b = commutator(o, b);
      std::printf(" n%d:%zu", n, b.size());
    }
    std::printf("  %.0f ms\n", ms_since(t0));
    std::fflush(stdout);
  }

  std::printf("== ladder vs full system ==\n");
  auto t0 = std::chrono::steady_clock::now();
  residual_ladder lad =
      commutation_residual(a, a0, 1.447320e-63, 4, {0, 3, 6, 9, 12, 15, 18, 21, 24, 27});
  std::printf("reference terms:");
  for (std::size_t c : lad.reference_terms) std::printf(" %zu", c);
  std::printf("\n");
  for (const residual_entry& e : lad.entries) {
    std::printf("k=%-2d exact=[", e.halo);
    for (bool b : e.order_exact) std::printf("%d", int(b));
    std::printf("] norms=[");
    for (double v : e.order_norm) std::printf(" %.6g", v);
    std::printf(" ] weighted=%.6g l1=%d\n", e.weighted, int(e.norms_are_l1));
  }
  std::printf("stabilization_halo=%d non_increasing=%d  %.0f ms\n", lad.stabilization_halo,
              int(lad.non_increasing), ms_since(t0));
  std::fflush(stdout);

  std::printf("== growth bound at lam=[-3,3], orders 1..5 ==\n");
  t0 = std::chrono::steady_clock::now();
  auto growth = check_growth_bound(a, interval(-3, 3), a0, 5);
  for (const growth_check& g : growth)
    std::printf("n=%d log_lhs=%.6f log_rhs=%.1f holds=%d l1=%d\n", g.order, g.log_lhs,
                g.log_rhs, int(g.holds), int(g.l1_route));
  std::printf("  %.0f ms\n", ms_since(t0));
  std::fflush(stdout);

  std::printf("== word-basis engine at lam=[-3,3] ==\n");
  t0 = std::chrono::steady_clock::now();
  monomial_space ms(interval(-3, 3));
  cpoly o = to_numeric(local_time_generator(a, interval(-3, 3)));
  sparse_matrix d = derivation_matrix(ms, o);
  std::printf("dim=%lld o_terms=%zu nnz=%lld build=%.0f ms\n",
              static_cast<long long>(ms.dim()), o.size(),
              static_cast<long long>(d.nonZeros()), ms_since(t0));

  t0 = std::chrono::steady_clock::now();
  cpoly a0c = to_numeric(a0);
  evolution_result certified =
      lie_series_evolve(a, interval(-3, 3), a0c, 1.447320e-63, 1e-8);
  std::printf("certified: engine=%d substeps=%d order=%d bound=%.6g converged=%d l1=%.6g"
              "  %.0f ms\n",
              int(certified.engine_used), certified.substeps, certified.order_used,
              certified.error_bound, int(certified.converged), certified.l1, ms_since(t0));
  std::fflush(stdout);

  // honest-size time: the finite-volume generator is bounded, so the series
  // converges for any t; compare against dense conjugation
  t0 = std::chrono::steady_clock::now();
  double t = 0.1;
  state_vector g = to_vector(ms, a0c), sum = g;
  cplx is(0.0, t);
  int used = 0;
  for (int k = 1; k <= 120; ++k) {
    g = (is / double(k)) * (d * g).eval();
    sum += g;
    used = k;
    if (g.lpNorm<1>() < 1e-16) break;
  }
  cpoly evolved = from_vector(ms, sum);
  fock_space fsp(interval(-3, 3));
  dense_matrix hm = dense_matrix(represent(fsp, local_time_generator(a, interval(-3, 3))));
  Eigen::SelfAdjointEigenSolver<dense_matrix> es(hm);
  dense_matrix ph =
      (cplx(0, t) * es.eigenvalues().array().cast<cplx>()).exp().matrix().asDiagonal();
  dense_matrix u = es.eigenvectors() * ph * es.eigenvectors().adjoint();
  dense_matrix lhs = dense_matrix(represent(fsp, evolved));
  dense_matrix rhs = u * dense_matrix(represent(fsp, a0c)) * u.adjoint();
  std::printf("t=0.1 orders=%d conjugation distance=%.3g (max entry), h_norm=%.6g  %.0f ms\n",
              used, (lhs - rhs).cwiseAbs().maxCoeff(), es.eigenvalues().cwiseAbs().maxCoeff(),
              ms_since(t0));

  // does H restricted to the window equal the represented generator square?
  dense_matrix qs1m = dense_matrix(represent(fsp, to_numeric(
      volume_charge(symmetrize(a).first, interval(-3, 3)))));
  std::printf("h == qs1^2 residual=%.3g\n", (hm - qs1m * qs1m).cwiseAbs().maxCoeff());
  return 0;
}
