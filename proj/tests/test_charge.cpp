#include <doctest.h>

#include <cmath>
#include <string>

#include "model_fixtures.hpp"
#include "test_util.hpp"

using namespace susylat;
using namespace test_util;
using poly = charge_poly;

namespace {

poly an(int i) { return poly::annihilator(at(i)); }
poly cr(int i) { return poly::creator(at(i)); }

// matrix of the graded commutator QM - gamma(M)Q computed entirely on the
// representation side
jw_oracle::Mat conjugated(const jw_oracle::Space& sp, const poly& q, const poly& a) {
  jw_oracle::Mat Q = oracle_matrix(sp, q);
  jw_oracle::Mat M = oracle_matrix(sp, a);
  jw_oracle::Mat G = jw_oracle::parity_operator(sp);
  return Q * M - G * M * G * Q;
}

}  // namespace

TEST_CASE("chain assignment is well formed") {
  charge_assignment a = chain_assignment();
  CHECK(validate(a).empty());
  CHECK(a.patterns.size() == 1);
  CHECK(a.patterns[0].value.homogeneous_parity() == 1);

  charge_assignment d = defect_assignment();
  CHECK(validate(d).empty());
  charge_assignment m = majorana_assignment();
  CHECK(validate(m).empty());
  CHECK(validate(zero_assignment()).empty());
}

TEST_CASE("validation rejects malformed assignments") {
  charge_assignment a = chain_assignment();
  a.patterns[0].value += poly::unit();  // no longer odd
  auto issues = validate(a);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].find("odd") != std::string::npos);

  a = chain_assignment();
  a.patterns[0].supp = interval(-1, 0);  // polynomial uses site 1
  issues = validate(a);
  REQUIRE(!issues.empty());
  CHECK(issues[0].find("escapes") != std::string::npos);

  a = chain_assignment();
  a.range = 1;
  issues = validate(a);
  bool diam = false;
  for (const auto& s : issues) diam |= s.find("diameter") != std::string::npos;
  CHECK(diam);

  a = chain_assignment();
  a.period = {2, 2};
  issues = validate(a);
  REQUIRE(!issues.empty());
  CHECK(issues[0].find("period") != std::string::npos);
}

TEST_CASE("translate enumeration over a window") {
  charge_assignment a = chain_assignment();
  auto met = patterns_meeting(a, interval(-1, 3));
  CHECK(met.size() == 4);  // cells at j = -1, 0, 1, 2
  region all;
  for (const auto& p : met) all = region_union(all, p.supp);
  CHECK(all == interval(-3, 5));

  auto inside = patterns_inside(a, interval(-1, 3));
  CHECK(inside.size() == 2);  // the j = 0 and j = 1 cells fit
  CHECK(inside[0].supp == interval(-1, 1));
  CHECK(inside[1].supp == interval(1, 3));

  // single site: exactly one cell contains it
  CHECK(patterns_meeting(a, interval(0, 0)).size() == 1);
  CHECK(patterns_meeting(a, interval(1, 1)).size() == 2);
}

TEST_CASE("window charge of the chain and its norm") {
  charge_assignment a = chain_assignment();
  poly q = local_charge(a, interval(-1, 3));
  CHECK(q.size() == 4);
  CHECK(support(q) == interval(-3, 5));

  jw_oracle::Space sp = space_of(interval(-3, 5));
  double n = jw_oracle::op_norm(oracle_matrix(sp, q));
  CHECK(n == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("superderivation of a creator") {
  charge_assignment a = chain_assignment();
  poly d = apply_delta(a, cr(-1));
  CHECK(d == -(cr(0) * an(1)) + cr(-2) * an(-3));
  CHECK(to_string(d) == "(1,0) * a+(-2) * a(-3) + (-1,0) * a+(0) * a(1)");
  CHECK(d.homogeneous_parity() == 0);  // odd charge times odd generator
}

TEST_CASE("superderivation matches conjugation by the represented charge") {
  charge_assignment a = chain_assignment();
  rng r(2024);
  auto sites = chain_sites(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    poly A = r.poly(sites, 3, 4);
    poly dA = apply_delta(a, A);
    poly q = local_charge(a, support(A));
    region w = region_union(region_union(support(q), support(A)), support(dA));
    if (w.empty()) continue;
    jw_oracle::Space sp = space_of(w);
    CHECK(matrix_distance(oracle_matrix(sp, dA), conjugated(sp, q, A)) < 1e-12);
  }
}

TEST_CASE("graded Leibniz rule") {
  charge_assignment a = chain_assignment();
  rng r(5150);
  auto sites = chain_sites(-3, 3);
  for (int trial = 0; trial < 25; ++trial) {
    poly F = r.poly(sites, 3, 3);
    poly G = r.poly(sites, 3, 3);
    CHECK(apply_delta(a, F * G) == apply_delta(a, F) * G + gamma(F) * apply_delta(a, G));
  }
}

TEST_CASE("conjugate superderivation identity") {
  charge_assignment a = chain_assignment();
  rng r(8086);
  auto sites = chain_sites(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    poly F = r.poly(sites, 3, 4);
    poly lhs = apply_delta_star(a, F);
    poly rhs = -adjoint(apply_delta(a, adjoint(gamma(F))));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("hermitian combinations recover the superderivation") {
  charge_assignment a = chain_assignment();
  auto [s1, s2] = symmetrize(a);
  for (const auto& p : s1.patterns) CHECK(adjoint(p.value) == p.value);
  for (const auto& p : s2.patterns) CHECK(adjoint(p.value) == p.value);
  CHECK(validate(s1).empty());
  CHECK(validate(s2).empty());

  rng r(777);
  auto sites = chain_sites(-2, 2);
  gaussian_rational two(2), i = gaussian_rational::i();
  for (int trial = 0; trial < 15; ++trial) {
    poly F = r.poly(sites, 3, 3);
    poly d1 = apply_delta(s1, F), d2 = apply_delta(s2, F);
    CHECK(two * apply_delta(a, F) == d1 - i * d2);
    CHECK(two * apply_delta_star(a, F) == d1 + i * d2);
  }
}

TEST_CASE("chain supercharge is nilpotent over two periods") {
  charge_assignment a = chain_assignment();
  nilpotency_result res = check_nilpotent(a, 2);
  CHECK(res.nilpotent);
  CHECK(res.routes_agree);
  CHECK(res.checked.size() == 8);  // sites 0..3, both generators
  CHECK(!res.counterexample.has_value());
  for (const auto& [g, dd] : res.checked) CHECK(dd.is_zero());
}

TEST_CASE("any sum of chain charges squares to zero") {
  charge_assignment a = chain_assignment();
  poly q = local_charge(a, interval(-5, 7));
  CHECK((q * q).is_zero());

  // an arbitrary subset of cells, not just a full window
  auto met = patterns_meeting(a, interval(-4, 6));
  poly partial;
  for (std::size_t k = 0; k < met.size(); k += 2) partial += met[k].value;
  CHECK((partial * partial).is_zero());
}

TEST_CASE("defect chain is not nilpotent and both double routes agree") {
  charge_assignment d = defect_assignment();
  nilpotency_result res = check_nilpotent(d, 2);
  CHECK(!res.nilpotent);
  CHECK(res.routes_agree);
  REQUIRE(res.counterexample.has_value());
  REQUIRE(res.checked.size() == 8);

  // the square acts nontrivially exactly on a(0), a+(1), a(2), a+(3)
  const double rt2 = std::sqrt(2.0);
  std::vector<double> expected = {rt2, 0, 0, rt2, rt2, 0, 0, rt2};
  for (std::size_t k = 0; k < res.checked.size(); ++k) {
    const poly& dd = res.checked[k].second;
    if (expected[k] == 0) {
      CHECK(dd.is_zero());
    } else {
      REQUIRE(!dd.is_zero());
      jw_oracle::Space sp = space_of(support(dd));
      CHECK(jw_oracle::op_norm(oracle_matrix(sp, dd)) ==
            doctest::Approx(expected[k]).epsilon(1e-10));
    }
  }
}

TEST_CASE("self-adjoint single-site charge is nilpotent with broken symmetry") {
  charge_assignment m = majorana_assignment();
  CHECK(apply_delta(m, an(0)) == poly::unit());
  CHECK(apply_delta(m, cr(0)) == poly::unit());

  nilpotency_result res = check_nilpotent(m, 2);
  CHECK(res.nilpotent);
  CHECK(res.routes_agree);

  // the symmetry is broken dynamically: every state sends the unit to 1,
  // so delta(a(0)) = 1 can never average to zero
  CHECK(apply_delta(m, an(0)).terms.count(monomial{}) == 1);
}

TEST_CASE("time generator routes coincide") {
  charge_assignment a = chain_assignment();
  rng r(31337);
  auto sites = chain_sites(-2, 2);
  for (int trial = 0; trial < 10; ++trial) {
    poly A = r.poly(sites, 3, 3);
    poly composed = apply_delta0(a, A, delta0_route::composed);
    poly squared = apply_delta0(a, A, delta0_route::squared_s1);
    poly paired = apply_delta0(a, A, delta0_route::pairwise);
    CHECK(composed == squared);
    CHECK(composed == paired);
    CHECK(contains(enlarge(support(A), 2 * a.range), support(composed)));
  }
}

TEST_CASE("time generator preserves parity and commutes with the supercharge") {
  charge_assignment a = chain_assignment();
  for (int s = 0; s <= 3; ++s) {
    for (poly g : {an(s), cr(s)}) {
      poly d0 = apply_delta0(a, g);
      if (!d0.is_zero()) CHECK(d0.homogeneous_parity() == 1);
      CHECK(apply_delta(a, d0) == apply_delta0(a, apply_delta(a, g)));
    }
  }
}

TEST_CASE("hermitian superderivations anticommute") {
  charge_assignment a = chain_assignment();
  auto [s1, s2] = symmetrize(a);
  for (int s = 0; s <= 1; ++s) {
    for (poly g : {an(s), cr(s)}) {
      poly lhs = apply_delta(s1, apply_delta(s2, g));
      poly rhs = apply_delta(s2, apply_delta(s1, g));
      CHECK(lhs == -rhs);
    }
  }
}

TEST_CASE("time generator on the defect model stays consistent") {
  // the pairwise route only needs the two hermitian combinations, so it
  // must agree with the composed route even without nilpotency
  charge_assignment d = defect_assignment();
  rng r(4242);
  auto sites = chain_sites(-1, 1);
  for (int trial = 0; trial < 6; ++trial) {
    poly A = r.poly(sites, 2, 3);
    CHECK(apply_delta0(d, A, delta0_route::squared_s1) ==
          apply_delta0(d, A, delta0_route::pairwise));
  }
}

TEST_CASE("zero assignment acts trivially") {
  charge_assignment z = zero_assignment();
  CHECK(local_charge(z, interval(-5, 5)).is_zero());
  CHECK(apply_delta(z, an(0)).is_zero());
  CHECK(check_nilpotent(z, 1).nilpotent);
}
