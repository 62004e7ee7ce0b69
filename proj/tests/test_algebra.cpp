#include <doctest.h>

#include "susylat/algebra.hpp"
#include "test_util.hpp"

using namespace susylat;
using test_util::chain_sites;
using test_util::matrix_distance;
using test_util::oracle_matrix;
using test_util::space_of;

namespace {

using poly = polynomial<gaussian_rational>;

poly an(int x) { return poly::annihilator(site{{x}}); }
poly cr(int x) { return poly::creator(site{{x}}); }

}  // namespace

TEST_CASE("canonical form of a a* on one site") {
  poly p = an(0) * cr(0);
  poly expected = poly::unit() - cr(0) * an(0);
  CHECK(p == expected);
  CHECK(p.size() == 2);
}

TEST_CASE("anticommuting annihilators cancel") {
  poly p = an(0) * an(1) + an(1) * an(0);
  CHECK(p.is_zero());
  CHECK(normalize<gaussian_rational>({{op_kind::annihilate, site{{0}}},
                                      {op_kind::annihilate, site{{0}}}})
            .is_zero());
}

TEST_CASE("multiplication order and grouping do not matter") {
  test_util::rng rng(101);
  auto sites = chain_sites(0, 2);
  auto sp = space_of(region{site{{0}}, site{{1}}, site{{2}}});
  for (int trial = 0; trial < 30; ++trial) {
    auto w = rng.word(sites, 6);
    poly left = poly::unit(), right = poly::unit();
    for (const auto& f : w) left = left * poly::generator(f.s, f.kind);
    for (auto it = w.rbegin(); it != w.rend(); ++it)
      right = poly::generator(it->s, it->kind) * right;
    poly direct = normalize(w);
    CHECK(left == right);
    CHECK(left == direct);
    // matrix reference multiplies the raw word with no rewriting at all
    jw_oracle::RawPoly raw{{{1.0, 0.0}, {}}};
    for (const auto& f : w)
      raw[0].factors.push_back(jw_oracle::RawFactor{f.s.x, f.kind == op_kind::create});
    CHECK(matrix_distance(jw_oracle::represent(sp, raw), oracle_matrix(sp, direct)) < 1e-12);
  }
}

TEST_CASE("adjoint matches the conjugate-linear anti-homomorphism") {
  CHECK(adjoint(an(0)) == cr(0));
  poly p = gaussian_rational::i() * (an(0) * cr(1));
  poly expected = normalize<gaussian_rational>(
      {{op_kind::annihilate, site{{1}}}, {op_kind::create, site{{0}}}},
      -gaussian_rational::i());
  CHECK(adjoint(p) == expected);

  test_util::rng rng(102);
  auto sites = chain_sites(-1, 1);
  auto sp = space_of(region{site{{-1}}, site{{0}}, site{{1}}});
  for (int trial = 0; trial < 100; ++trial) {
    poly a = rng.poly(sites, 3, 4), b = rng.poly(sites, 3, 4);
    CHECK(adjoint(adjoint(a)) == a);
    CHECK(adjoint(a * b) == adjoint(b) * adjoint(a));
    CHECK(matrix_distance(oracle_matrix(sp, adjoint(a)),
                          oracle_matrix(sp, a).adjoint()) < 1e-12);
  }
}

TEST_CASE("grading flips odd words and is a *-automorphism") {
  CHECK(gamma(an(0)) == -an(0));
  poly even = cr(0) * an(1);
  CHECK(gamma(even) == even);
  test_util::rng rng(103);
  auto sites = chain_sites(0, 2);
  for (int trial = 0; trial < 50; ++trial) {
    poly a = rng.poly(sites, 3, 4), b = rng.poly(sites, 3, 4);
    CHECK(gamma(gamma(a)) == a);
    CHECK(gamma(a * b) == gamma(a) * gamma(b));
    CHECK(gamma(adjoint(a)) == adjoint(gamma(a)));
  }
}

TEST_CASE("graded commutator realizes the anticommutation relations") {
  CHECK(graded_commutator(an(0), cr(1)).is_zero());
  CHECK(graded_commutator(an(0), cr(0)) == poly::unit());
  CHECK(graded_commutator(an(0), an(1)).is_zero());
}

TEST_CASE("graded commutator vanishes on disjointly supported elements") {
  test_util::rng rng(104);
  auto left = chain_sites(0, 1);
  auto right = chain_sites(5, 6);
  for (int trial = 0; trial < 50; ++trial) {
    poly f = rng.poly(left, 3, 4), g = rng.poly(right, 3, 4);
    CHECK(graded_commutator(f, g).is_zero());
  }
}

TEST_CASE("parity bookkeeping") {
  test_util::rng rng(105);
  auto sites = chain_sites(0, 2);
  for (int trial = 0; trial < 50; ++trial) {
    poly f = rng.poly(sites, 3, 4).parity_part(rng.uniform(0, 1));
    poly g = rng.poly(sites, 3, 4).parity_part(rng.uniform(0, 1));
    if (f.is_zero() || g.is_zero()) continue;
    int pf = *f.homogeneous_parity(), pg = *g.homogeneous_parity();
    poly fg = f * g;
    if (!fg.is_zero()) CHECK(*fg.homogeneous_parity() == (pf + pg) % 2);
    poly br = graded_commutator(f, g);
    if (!br.is_zero()) CHECK(*br.homogeneous_parity() == (pf + pg) % 2);
  }
}

TEST_CASE("support computation") {
  CHECK(support(cr(0) * an(5)) == region{site{{0}}, site{{5}}});
  CHECK(support(poly::unit()).empty());
  poly p = an(0) * cr(0);
  CHECK(support(p) == region{site{{0}}});  // the 1 - a*a form keeps site 0
  CHECK(p.size() > 1);
}

TEST_CASE("normalization to zero coincides with vanishing matrix") {
  // (a + a*)^2 = 1 on a single site
  poly q = an(0) + cr(0);
  CHECK(q * q == poly::unit());

  test_util::rng rng(106);
  auto sites = chain_sites(0, 1);
  auto sp = space_of(region{site{{0}}, site{{1}}});
  for (int trial = 0; trial < 50; ++trial) {
    poly a = rng.poly(sites, 4, 4);
    poly b = rng.poly(sites, 4, 4);
    poly diff = a * b - a * b;
    CHECK(diff.is_zero());
    bool sym_zero = (a * b - b * a).is_zero();
    double mat = matrix_distance(
        oracle_matrix(sp, a) * oracle_matrix(sp, b),
        oracle_matrix(sp, b) * oracle_matrix(sp, a));
    CHECK(sym_zero == (mat < 1e-12));
  }
}

TEST_CASE("translation shifts supports and commutes with products") {
  test_util::rng rng(107);
  auto sites = chain_sites(0, 2);
  std::vector<int> by{3};
  for (int trial = 0; trial < 20; ++trial) {
    poly a = rng.poly(sites, 3, 4), b = rng.poly(sites, 3, 4);
    CHECK(translated(a * b, by) == translated(a, by) * translated(b, by));
    CHECK(translated(adjoint(a), by) == adjoint(translated(a, by)));
  }
  CHECK(support(translated(an(0), by)) == region{site{{3}}});
}

TEST_CASE("text form uses the CLI grammar") {
  poly p = -(cr(0) * an(1)) + cr(-2) * an(-3);
  CHECK(to_string(p) == "(1,0) * a+(-2) * a(-3) + (-1,0) * a+(0) * a(1)");
  CHECK(to_string(poly::zero()) == "(0,0)");
  gaussian_rational half(rational(1, 2));
  CHECK(to_string(poly::scalar(half)) == "(1/2,0)");
}
