// One-shot reference calculator.  Everything here is dense brute force on
// explicit matrices; the numbers it prints are pinned as expected values
// in the test suite.  Keep it independent of the library headers.
#include <cmath>
#include <cstdio>
#include <vector>

#include "../tests/jw_oracle.hpp"

using namespace jw_oracle;

namespace {

// chain supercharge density: pattern at j is a(2j+1) a+(2j) a(2j-1)
RawTerm chain_pattern(int j) {
  return term({1.0, 0.0}, {an(2 * j + 1), cr(2 * j), an(2 * j - 1)});
}

// same with an added linear defect a+(2j+1); breaks nilpotency
RawPoly defect_pattern(int j) {
  return {chain_pattern(j), term({1.0, 0.0}, {cr(2 * j + 1)})};
}

RawPoly adjoint_poly(const RawPoly& p) {
  RawPoly out;
  for (const RawTerm& t : p) {
    RawTerm r;
    r.coeff = std::conj(t.coeff);
    for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it)
      r.factors.push_back(RawFactor{it->site, !it->dagger});
    out.push_back(std::move(r));
  }
  return out;
}

// graded commutator [Q, A] with Q odd: QA - (G A G) Q
Mat graded_comm(const Mat& q, const Mat& a, const Mat& g) {
  return q * a - g * a * g * q;
}

// chain patterns whose support meets [lo, hi]
std::vector<int> chain_js_meeting(int lo, int hi) {
  std::vector<int> js;
  for (int j = -50; j <= 50; ++j)
    if (2 * j + 1 >= lo && 2 * j - 1 <= hi) js.push_back(j);
  return js;
}

void probe_delta_on_generator() {
  std::printf("== delta(a+(-1)) for the chain model ==\n");
  Space sp = Space::interval(-3, 1);
  Mat g = parity_operator(sp);
  // charges meeting {-1}: j = -1 and j = 0
  Mat q = represent(sp, {chain_pattern(-1), chain_pattern(0)});
  Mat a = represent(sp, {term({1, 0}, {cr(-1)})});
  Mat d = graded_comm(q, a, g);
  // candidate closed form: -a+(0) a(1) + a+(-2) a(-3)
  Mat cand = represent(sp, {term({-1, 0}, {cr(0), an(1)}),
                            term({1, 0}, {cr(-2), an(-3)})});
  std::printf("FROZEN |delta(a+(-1)) - (-a+(0)a(1) + a+(-2)a(-3))| = %.3e\n",
              op_norm(d - cand));
  // single-pattern variant (j = 0 only), for comparison
  Mat q0 = represent(sp, {chain_pattern(0)});
  Mat d0 = graded_comm(q0, a, g);
  Mat cand0 = represent(sp, {term({-1, 0}, {cr(0), an(1)})});
  std::printf("FROZEN |{Psi(X_0), a+(-1)} - (-a+(0)a(1))| = %.3e\n",
              op_norm(d0 - cand0));
}

void probe_local_charge() {
  std::printf("== local charge over I = [-1, 3] ==\n");
  std::vector<int> js = chain_js_meeting(-1, 3);
  std::printf("FROZEN translates meeting [-1,3]: count = %zu, j =", js.size());
  for (int j : js) std::printf(" %d", j);
  std::printf("\n");
  Space sp = Space::interval(-3, 5);
  RawPoly c;
  for (int j : js) c.push_back(chain_pattern(j));
  Mat m = represent(sp, c);
  std::printf("FROZEN |C_Psi([-1,3])| on [-3,5] = %.12f\n", op_norm(m));
}

void probe_nilpotency(bool defect) {
  std::printf("== delta^2 on generators, %s model ==\n",
              defect ? "defect" : "chain");
  for (int i = 0; i <= 3; ++i) {
    // patterns disjoint from an operator's support commute away exactly,
    // so the inner bracket needs only patterns containing site i and the
    // outer bracket only patterns meeting their combined support
    std::vector<int> inner = chain_js_meeting(i, i);
    int jlo = inner.front(), jhi = inner.back();
    std::vector<int> outer = chain_js_meeting(2 * jlo - 1, 2 * jhi + 1);
    int slo = 2 * outer.front() - 1, shi = 2 * outer.back() + 1;
    Space sp = Space::interval(slo, shi);
    Mat g = parity_operator(sp);
    auto charge = [&](const std::vector<int>& js) {
      RawPoly c;
      for (int j : js) {
        if (defect) {
          RawPoly d = defect_pattern(j);
          c.insert(c.end(), d.begin(), d.end());
        } else {
          c.push_back(chain_pattern(j));
        }
      }
      return represent(sp, c);
    };
    Mat q_in = charge(inner), q_out = charge(outer);
    for (bool dag : {false, true}) {
      Mat a = represent(sp, {term({1, 0}, {dag ? cr(i) : an(i)})});
      Mat d1 = graded_comm(q_in, a, g);
      Mat d2 = graded_comm(q_out, d1, g);
      std::printf("FROZEN |delta^2(a%s(%d))| = %.9f\n", dag ? "+" : "", i,
                  op_norm(d2));
    }
  }
}

void probe_three_site_spectrum() {
  std::printf("== three-site chain spectrum, patterns inside [-1,1] ==\n");
  Space sp = Space::interval(-1, 1);
  Mat q = represent(sp, {chain_pattern(0)});
  std::printf("FROZEN |Psi(X_0)| = %.12f\n", op_norm(q));
  Mat qs1 = q + Mat(q.adjoint());
  std::printf("FROZEN |Psi_s1(X_0)| = %.12f\n", op_norm(qs1));
  Mat h = qs1 * qs1;
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  std::printf("FROZEN eigenvalues:");
  for (int k = 0; k < es.eigenvalues().size(); ++k)
    std::printf(" %.9f", es.eigenvalues()(k));
  std::printf("\n");
  // kernel split by parity
  Mat g = parity_operator(sp);
  int ker_even = 0, ker_odd = 0, excited = 0;
  for (int k = 0; k < es.eigenvalues().size(); ++k) {
    Vec v = es.eigenvectors().col(k);
    double pexp = (v.adjoint() * g * v)(0, 0).real();
    if (es.eigenvalues()(k) < 1e-12)
      (pexp > 0 ? ker_even : ker_odd)++;
    else
      excited++;
  }
  std::printf("FROZEN kernel even/odd = %d/%d, excited = %d\n", ker_even,
              ker_odd, excited);
  std::printf("FROZEN nilpotency |Q^2| = %.3e\n", op_norm(q * q));
}

void probe_norm_constants() {
  std::printf("== growth constants for the chain model ==\n");
  Space sp = Space::interval(-1, 1);
  Mat q = represent(sp, {chain_pattern(0)});
  double w = op_norm(q + Mat(q.adjoint()));
  // overlap counting: pattern j meets pattern k iff |j - k| <= 1,
  // odd sites belong to two patterns, even sites to one
  double l_odd = 2 * (w * 3 * w), l_even = 1 * (w * 3 * w);
  double big_l = std::max(l_odd, l_even);
  std::printf("FROZEN w = %.12f, L = %.6f (odd %.1f / even %.1f)\n", w, big_l,
              l_odd, l_even);
  double r = 3;  // declared interaction range
  double log_m = 8 * r * big_l;
  std::printf("FROZEN log M = %.6f, M = %.6e, t0 = %.6e\n", log_m,
              std::exp(log_m), std::exp(-log_m));
}

void probe_majorana() {
  std::printf("== single-site real combination a + a+ ==\n");
  for (int i : {0, 1}) {
    Space sp = Space::interval(i - 2, i + 2);
    Mat g = parity_operator(sp);
    RawPoly c;
    for (int j = i - 2; j <= i + 2; ++j)
      c.push_back(term({1, 0}, {an(j)})), c.push_back(term({1, 0}, {cr(j)}));
    Mat q = represent(sp, c);
    Mat a = represent(sp, {term({1, 0}, {an(i)})});
    Mat d1 = graded_comm(q, a, g);
    Mat d2 = graded_comm(q, d1, g);
    std::printf("FROZEN majorana |delta(a(%d)) - 1| = %.3e, |delta^2| = %.3e\n",
                i, op_norm(d1 - Mat::Identity(sp.dim(), sp.dim())),
                op_norm(d2));
  }
  // broken supersymmetry: three-site interior Hamiltonian is 4*3*I
  Space sp = Space::interval(-1, 1);
  RawPoly c;
  for (int j = -1; j <= 1; ++j)
    c.push_back(term({1, 0}, {an(j)})), c.push_back(term({1, 0}, {cr(j)}));
  RawPoly cs1 = c;
  RawPoly cadj = adjoint_poly(c);
  cs1.insert(cs1.end(), cadj.begin(), cadj.end());
  Mat qs1 = represent(sp, cs1);
  Mat h = qs1 * qs1;
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  std::printf("FROZEN majorana 3-site H spectrum: min %.9f max %.9f\n",
              es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff());
}

}  // namespace

int main() {
  probe_delta_on_generator();
  probe_local_charge();
  probe_nilpotency(false);
  probe_nilpotency(true);
  probe_three_site_spectrum();
  probe_norm_constants();
  probe_majorana();
  return 0;
}
