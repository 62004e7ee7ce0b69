#pragma once

#include <susylat/charge.hpp>

namespace susylat {

inline site at(int i) { return site{{i}}; }

// supersymmetric fermion chain: one cubic charge per unit cell of two
// sites, q_j = a(2j+1) a+(2j) a(2j-1) on {2j-1, 2j, 2j+1}
inline charge_assignment chain_assignment() {
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

// chain with a linear defect term added to every cell; its square of the
// induced superderivation no longer vanishes
inline charge_assignment defect_assignment() {
  charge_assignment a = chain_assignment();
  a.name = "defect";
  a.patterns[0].value += charge_poly::creator(at(1));
  return a;
}

// self-adjoint single-site charge a(j) + a+(j) at every site
inline charge_assignment majorana_assignment() {
  charge_assignment a;
  a.name = "majorana";
  a.dimension = 1;
  a.period = {1};
  a.range = 1;
  charge_poly v = charge_poly::annihilator(at(0)) + charge_poly::creator(at(0));
  a.patterns.push_back({interval(0, 0), std::move(v)});
  return a;
}

inline charge_assignment zero_assignment() {
  charge_assignment a;
  a.name = "zero";
  a.dimension = 1;
  a.period = {1};
  a.range = 0;
  return a;
}

}  // namespace susylat
