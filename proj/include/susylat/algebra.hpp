#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lattice.hpp"
#include "rational.hpp"

namespace susylat {

enum class op_kind : std::uint8_t { create = 0, annihilate = 1 };

// one a_i or a_i^*; member order makes the default comparison
// (kind, site), which is exactly the canonical factor order:
// creations before annihilations, sites ascending within each group
struct mode_factor {
  op_kind kind;
  site s;
  auto operator<=>(const mode_factor&) const = default;
};

// canonical normal-ordered word; the empty word is the unit
struct monomial {
  std::vector<mode_factor> f;

  int parity() const { return static_cast<int>(f.size() & 1); }
  bool is_unit() const { return f.empty(); }

  friend bool operator==(const monomial& a, const monomial& b) { return a.f == b.f; }
  friend auto operator<=>(const monomial& a, const monomial& b) {
    if (auto c = a.f.size() <=> b.f.size(); c != 0) return c;
    return a.f <=> b.f;
  }
};

template <class S>
struct polynomial;

namespace detail {

template <class S>
void add_term(std::map<monomial, S>& out, monomial m, const S& c) {
  if (scalar_ops<S>::is_zero(c)) return;
  auto [it, fresh] = out.try_emplace(std::move(m), c);
  if (!fresh) {
    it->second += c;
    if (scalar_ops<S>::is_zero(it->second)) out.erase(it);
  }
}

// rewrite a raw factor word into the canonical order with the
// anticommutation relations; a a* on one site branches into 1 - a* a
template <class S>
void accumulate_normalized(std::map<monomial, S>& out, std::vector<mode_factor> raw, S coeff) {
  std::vector<std::pair<std::vector<mode_factor>, S>> work;
  work.emplace_back(std::move(raw), std::move(coeff));
  while (!work.empty()) {
    auto [f, c] = std::move(work.back());
    work.pop_back();
    bool dead = false;
    std::size_t i = 0;
    while (i + 1 < f.size()) {
      mode_factor& x = f[i];
      mode_factor& y = f[i + 1];
      if (x.kind == y.kind) {
        if (x.s == y.s) {
          dead = true;  // repeated generator squares to zero
          break;
        }
        if (y.s < x.s) {
          std::swap(x, y);
          c = -c;
          i = i ? i - 1 : 0;
          continue;
        }
        ++i;
      } else if (x.kind == op_kind::annihilate) {
        if (x.s == y.s) {
          std::vector<mode_factor> dropped;
          dropped.reserve(f.size() - 2);
          dropped.insert(dropped.end(), f.begin(), f.begin() + i);
          dropped.insert(dropped.end(), f.begin() + i + 2, f.end());
          work.emplace_back(std::move(dropped), c);
        }
        std::swap(x, y);
        c = -c;
        i = i ? i - 1 : 0;
      } else {
        ++i;  // creation before annihilation is already canonical
      }
    }
    if (!dead) add_term(out, monomial{std::move(f)}, c);
  }
}

}  // namespace detail

template <class S>
struct polynomial {
  std::map<monomial, S> terms;

  polynomial() = default;

  static polynomial zero() { return {}; }
  static polynomial unit() { return scalar(scalar_ops<S>::from_int(1)); }
  static polynomial scalar(const S& c) {
    polynomial p;
    detail::add_term(p.terms, monomial{}, c);
    return p;
  }
  static polynomial generator(const site& s, op_kind k) {
    polynomial p;
    p.terms.emplace(monomial{{mode_factor{k, s}}}, scalar_ops<S>::from_int(1));
    return p;
  }
  static polynomial annihilator(const site& s) { return generator(s, op_kind::annihilate); }
  static polynomial creator(const site& s) { return generator(s, op_kind::create); }

  bool is_zero() const { return terms.empty(); }
  std::size_t size() const { return terms.size(); }

  // parity of all terms if homogeneous
  std::optional<int> homogeneous_parity() const {
    std::optional<int> p;
    for (const auto& [m, c] : terms) {
      if (!p) p = m.parity();
      else if (*p != m.parity()) return std::nullopt;
    }
    if (!p) p = 0;  // zero counts as even (and as odd); report even
    return p;
  }

  polynomial parity_part(int parity) const {
    polynomial out;
    for (const auto& [m, c] : terms)
      if (m.parity() == parity) out.terms.emplace(m, c);
    return out;
  }
  polynomial even_part() const { return parity_part(0); }
  polynomial odd_part() const { return parity_part(1); }

  friend polynomial operator+(const polynomial& a, const polynomial& b) {
    polynomial out = a;
    for (const auto& [m, c] : b.terms) detail::add_term(out.terms, m, c);
    return out;
  }
  friend polynomial operator-(const polynomial& a, const polynomial& b) {
    polynomial out = a;
    for (const auto& [m, c] : b.terms) detail::add_term(out.terms, m, -c);
    return out;
  }
  friend polynomial operator-(const polynomial& a) {
    polynomial out;
    for (const auto& [m, c] : a.terms) out.terms.emplace(m, -c);
    return out;
  }
  friend polynomial operator*(const S& c, const polynomial& a) {
    polynomial out;
    if (scalar_ops<S>::is_zero(c)) return out;
    for (const auto& [m, v] : a.terms) detail::add_term(out.terms, m, c * v);
    return out;
  }
  friend polynomial operator*(const polynomial& a, const polynomial& b) {
    polynomial out;
    for (const auto& [ma, ca] : a.terms)
      for (const auto& [mb, cb] : b.terms) {
        std::vector<mode_factor> raw;
        raw.reserve(ma.f.size() + mb.f.size());
        raw.insert(raw.end(), ma.f.begin(), ma.f.end());
        raw.insert(raw.end(), mb.f.begin(), mb.f.end());
        detail::accumulate_normalized(out.terms, std::move(raw), ca * cb);
      }
    return out;
  }
  polynomial& operator+=(const polynomial& b) { return *this = *this + b; }
  polynomial& operator-=(const polynomial& b) { return *this = *this - b; }

  friend bool operator==(const polynomial& a, const polynomial& b) { return a.terms == b.terms; }
};

// build the canonical form of an arbitrary factor word
template <class S = gaussian_rational>
polynomial<S> normalize(std::vector<mode_factor> raw, S coeff = scalar_ops<S>::from_int(1)) {
  polynomial<S> out;
  detail::accumulate_normalized(out.terms, std::move(raw), std::move(coeff));
  return out;
}

template <class S>
polynomial<S> adjoint(const polynomial<S>& p) {
  polynomial<S> out;
  for (const auto& [m, c] : p.terms) {
    std::vector<mode_factor> raw;
    raw.reserve(m.f.size());
    for (auto it = m.f.rbegin(); it != m.f.rend(); ++it)
      raw.push_back(mode_factor{it->kind == op_kind::create ? op_kind::annihilate : op_kind::create,
                                it->s});
    detail::accumulate_normalized(out.terms, std::move(raw), scalar_ops<S>::conj(c));
  }
  return out;
}

// grading automorphism: flips the sign of odd words
template <class S>
polynomial<S> gamma(const polynomial<S>& p) {
  polynomial<S> out;
  for (const auto& [m, c] : p.terms) out.terms.emplace(m, m.parity() ? -c : c);
  return out;
}

// [f,g]_gamma: anticommutator on odd x odd, commutator otherwise,
// extended bilinearly to mixed-parity inputs
template <class S>
polynomial<S> graded_commutator(const polynomial<S>& f, const polynomial<S>& g) {
  polynomial<S> f0 = f.even_part(), f1 = f.odd_part();
  polynomial<S> out = f0 * g - g * f0;
  if (!f1.is_zero()) out += f1 * g - gamma(g) * f1;
  return out;
}

template <class S>
polynomial<S> commutator(const polynomial<S>& f, const polynomial<S>& g) {
  return f * g - g * f;
}

template <class S>
region support(const polynomial<S>& p) {
  region out;
  for (const auto& [m, c] : p.terms)
    for (const mode_factor& x : m.f) out.insert(x.s);
  return out;
}

template <class S>
polynomial<S> translated(const polynomial<S>& p, const std::vector<int>& by) {
  polynomial<S> out;
  for (const auto& [m, c] : p.terms) {
    monomial t = m;
    for (mode_factor& x : t.f) x.s = shifted(x.s, by);
    out.terms.emplace(std::move(t), c);  // shifting preserves factor order
  }
  return out;
}

inline polynomial<std::complex<double>> to_numeric(const polynomial<gaussian_rational>& p) {
  polynomial<std::complex<double>> out;
  for (const auto& [m, c] : p.terms) {
    auto z = c.to_complex();
    if (z != std::complex<double>(0.0, 0.0)) out.terms.emplace(m, z);
  }
  return out;
}

// sum of |coefficient|: an upper bound for the operator norm, since each
// canonical word represents as a matrix of operator norm at most 1
template <class S>
double l1_norm(const polynomial<S>& p) {
  double out = 0;
  for (const auto& [m, c] : p.terms) out += scalar_ops<S>::abs(c);
  return out;
}

inline rational l1_upper_bound_exact(const polynomial<gaussian_rational>& p) {
  rational out = 0;
  for (const auto& [m, c] : p.terms) out += c.abs_upper();
  return out;
}

template <class S>
std::size_t max_degree(const polynomial<S>& p) {
  std::size_t d = 0;
  for (const auto& [m, c] : p.terms) d = std::max(d, m.f.size());
  return d;
}

// text form in the CLI grammar: (re,im) * a+(i) * a(j) + ...
inline std::string to_string(const monomial& m) {
  std::string out;
  for (const mode_factor& x : m.f) {
    if (!out.empty()) out += " * ";
    out += x.kind == op_kind::create ? "a+" : "a";
    std::string coords;
    for (std::size_t i = 0; i < x.s.x.size(); ++i) {
      if (i) coords += ",";
      coords += std::to_string(x.s.x[i]);
    }
    out += "(" + coords + ")";
  }
  return out;
}

template <class S>
std::string to_string(const polynomial<S>& p) {
  if (p.terms.empty()) return "(0,0)";
  std::string out;
  for (const auto& [m, c] : p.terms) {
    if (!out.empty()) out += " + ";
    out += scalar_ops<S>::str(c);
    if (!m.is_unit()) out += " * " + to_string(m);
  }
  return out;
}

}  // namespace susylat
