#pragma once

#include <algorithm>
#include <compare>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace susylat {

// lattice point in Z^nu; lexicographic order fixes the canonical site order
struct site {
  std::vector<int> x;

  site() = default;
  explicit site(std::vector<int> c) : x(std::move(c)) {}
  site(std::initializer_list<int> c) : x(c) {}

  auto operator<=>(const site&) const = default;
};

using region = std::set<site>;

// Chebyshev distance max_i |x_i - y_i|
inline int distance(const site& a, const site& b) {
  if (a.x.size() != b.x.size()) throw std::invalid_argument("site dimension mismatch");
  int d = 0;
  for (std::size_t i = 0; i < a.x.size(); ++i)
    d = std::max(d, std::abs(a.x[i] - b.x[i]));
  return d;
}

inline int diameter(const region& r) {
  int d = 0;
  for (auto i = r.begin(); i != r.end(); ++i)
    for (auto j = std::next(i); j != r.end(); ++j)
      d = std::max(d, distance(*i, *j));
  return d;
}

inline site shifted(const site& s, const std::vector<int>& by) {
  site out = s;
  for (std::size_t i = 0; i < out.x.size() && i < by.size(); ++i) out.x[i] += by[i];
  return out;
}

inline region shifted(const region& r, const std::vector<int>& by) {
  region out;
  for (const site& s : r) out.insert(shifted(s, by));
  return out;
}

// all sites within distance d of the region
inline region enlarge(const region& r, int d) {
  if (d <= 0 || r.empty()) return r;
  std::size_t nu = r.begin()->x.size();
  std::vector<int> off(nu, -d);
  region out;
  for (;;) {
    for (const site& s : r) out.insert(shifted(s, off));
    std::size_t k = 0;
    while (k < nu && off[k] == d) off[k++] = -d;
    if (k == nu) break;
    ++off[k];
  }
  return out;
}

// 1-d interval {lo..hi}
inline region interval(int lo, int hi) {
  region out;
  for (int x = lo; x <= hi; ++x) out.insert(site{{x}});
  return out;
}

inline bool intersects(const region& a, const region& b) {
  const region& small = a.size() <= b.size() ? a : b;
  const region& big = a.size() <= b.size() ? b : a;
  for (const site& s : small)
    if (big.count(s)) return true;
  return false;
}

inline bool contains(const region& a, const region& b) {
  for (const site& s : b)
    if (!a.count(s)) return false;
  return true;
}

inline region region_union(const region& a, const region& b) {
  region out = a;
  out.insert(b.begin(), b.end());
  return out;
}

inline std::string to_string(const site& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s.x[i]);
  }
  return out + ")";
}

inline std::string to_string(const region& r) {
  std::string out = "{";
  bool first = true;
  for (const site& s : r) {
    if (!first) out += ", ";
    first = false;
    out += to_string(s);
  }
  return out + "}";
}

}  // namespace susylat
