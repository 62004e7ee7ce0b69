#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "charge.hpp"

namespace susylat {

struct parse_error : std::runtime_error {
  int line;
  int column;
  parse_error(std::string msg, int l, int c)
      : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) +
                           ": " + msg),
        line(l),
        column(c) {}
};

// numeric parameters driving the verification suite; every field has a
// usable default so a bare assignment is already runnable
struct model_params {
  int region_lo = -1;
  int region_hi = 1;
  double time = 0.1;
  double tol = 1e-8;
  unsigned seed = 1234;
  int ensembles = 25;
  int modes = 1;
  int cutoff = 4;
  int grid = 1024;
  double momentum = 0.9;
};

struct model_data {
  charge_assignment assignment;
  std::vector<std::string> suites;
  model_params params;
};

namespace detail {

struct cursor {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  bool done() const { return pos >= text.size(); }
  char peek() const { return done() ? '\0' : text[pos]; }
  char get() {
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }
  void skip_space_and_comments() {
    while (!done()) {
      char c = peek();
      if (c == '#') {
        while (!done() && peek() != '\n') get();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        get();
      } else {
        return;
      }
    }
  }
  [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, line, col); }
};

inline bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

inline std::string read_word(cursor& cur) {
  cur.skip_space_and_comments();
  if (cur.done() || !word_char(cur.peek())) cur.fail("expected a word");
  std::string w;
  while (!cur.done() && word_char(cur.peek())) w += cur.get();
  return w;
}

inline long read_int(cursor& cur, const std::string& what) {
  cur.skip_space_and_comments();
  int l = cur.line, c = cur.col;
  std::string w;
  if (cur.peek() == '-' || cur.peek() == '+') w += cur.get();
  while (!cur.done() && std::isdigit(static_cast<unsigned char>(cur.peek()))) w += cur.get();
  if (w.empty() || (w.size() == 1 && !std::isdigit(static_cast<unsigned char>(w[0]))))
    throw parse_error("expected an integer for " + what, l, c);
  return std::stol(w);
}

inline double read_real(cursor& cur, const std::string& what) {
  cur.skip_space_and_comments();
  int l = cur.line, c = cur.col;
  std::string w;
  auto take = [&](auto pred) {
    while (!cur.done() && pred(cur.peek())) w += cur.get();
  };
  if (cur.peek() == '-' || cur.peek() == '+') w += cur.get();
  take([](char ch) {
    return std::isdigit(static_cast<unsigned char>(ch)) || ch == '.' || ch == 'e' ||
           ch == 'E' || ch == '-' || ch == '+';
  });
  try {
    std::size_t used = 0;
    double val = std::stod(w, &used);
    if (used != w.size()) throw std::invalid_argument(w);
    return val;
  } catch (const std::exception&) {
    throw parse_error("expected a number for " + what, l, c);
  }
}

inline void expect(cursor& cur, char c) {
  cur.skip_space_and_comments();
  if (cur.peek() != c) cur.fail(std::string("expected '") + c + "'");
  cur.get();
}

// exact rational literal: integer, fraction p/q, or finite decimal
inline rational read_rational(cursor& cur) {
  cur.skip_space_and_comments();
  int l = cur.line, c = cur.col;
  bool neg = false;
  if (cur.peek() == '-' || cur.peek() == '+') neg = cur.get() == '-';
  std::string digits;
  while (std::isdigit(static_cast<unsigned char>(cur.peek()))) digits += cur.get();
  if (digits.empty()) throw parse_error("expected a rational number", l, c);
  rational val(digits);
  if (cur.peek() == '/') {
    cur.get();
    std::string den;
    while (std::isdigit(static_cast<unsigned char>(cur.peek()))) den += cur.get();
    if (den.empty() || rational(den) == 0)
      throw parse_error("expected a nonzero denominator", cur.line, cur.col);
    val /= rational(den);
  } else if (cur.peek() == '.') {
    cur.get();
    std::string frac;
    while (std::isdigit(static_cast<unsigned char>(cur.peek()))) frac += cur.get();
    if (frac.empty()) throw parse_error("expected digits after the decimal point", cur.line, cur.col);
    rational den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    val += rational(frac) / den;
  }
  return neg ? -val : val;
}

inline site read_site(cursor& cur, int dimension) {
  cur.skip_space_and_comments();
  std::vector<int> x;
  if (cur.peek() == '(') {
    cur.get();
    for (int i = 0; i < dimension; ++i) {
      if (i) expect(cur, ',');
      x.push_back(static_cast<int>(read_int(cur, "site coordinate")));
    }
    expect(cur, ')');
  } else {
    if (dimension != 1) cur.fail("sites need a coordinate tuple in dimension > 1");
    x.push_back(static_cast<int>(read_int(cur, "site coordinate")));
  }
  return site{std::move(x)};
}

// polynomial grammar: sum of products of a(i), a+(i), and (re,im)
// scalars; "a+" must be written without a space so that '+' elsewhere
// still separates terms
inline charge_poly read_polynomial(cursor& cur, int dimension) {
  auto read_factor = [&](charge_poly& term) {
    cur.skip_space_and_comments();
    int l = cur.line, c = cur.col;
    if (cur.peek() == '(') {
      cur.get();
      rational re = read_rational(cur);
      expect(cur, ',');
      rational im = read_rational(cur);
      expect(cur, ')');
      term = term * charge_poly::scalar(gaussian_rational(re, im));
      return;
    }
    if (cur.peek() != 'a') throw parse_error("expected a(i), a+(i), or (re,im)", l, c);
    cur.get();
    bool create = false;
    if (cur.peek() == '+') {
      cur.get();
      create = true;
    }
    expect(cur, '(');
    std::vector<int> x;
    for (int i = 0; i < dimension; ++i) {
      if (i) expect(cur, ',');
      x.push_back(static_cast<int>(read_int(cur, "site coordinate")));
    }
    expect(cur, ')');
    site s{std::move(x)};
    term = term * (create ? charge_poly::creator(s) : charge_poly::annihilator(s));
  };

  charge_poly out = charge_poly::zero();
  for (;;) {
    charge_poly term = charge_poly::unit();
    read_factor(term);
    for (;;) {
      cur.skip_space_and_comments();
      if (cur.peek() == '*') {
        cur.get();
        read_factor(term);
      } else {
        break;
      }
    }
    out = out + term;
    cur.skip_space_and_comments();
    if (cur.peek() == '+') {
      cur.get();
    } else {
      break;
    }
  }
  return out;
}

inline charge_pattern read_pattern(cursor& cur, int dimension, int range) {
  expect(cur, '{');
  region supp;
  std::optional<charge_poly> poly;
  int poly_line = cur.line, poly_col = cur.col;
  for (;;) {
    cur.skip_space_and_comments();
    if (cur.peek() == '}') {
      cur.get();
      break;
    }
    int l = cur.line, c = cur.col;
    std::string key = read_word(cur);
    expect(cur, '=');
    if (key == "sites") {
      expect(cur, '[');
      for (;;) {
        supp.insert(read_site(cur, dimension));
        cur.skip_space_and_comments();
        if (cur.peek() == ',') {
          cur.get();
        } else {
          break;
        }
      }
      expect(cur, ']');
    } else if (key == "polynomial") {
      expect(cur, '"');
      poly_line = cur.line;
      poly_col = cur.col;
      poly = read_polynomial(cur, dimension);
      expect(cur, '"');
    } else {
      throw parse_error("unknown pattern field '" + key + "'", l, c);
    }
  }
  if (supp.empty()) cur.fail("pattern needs a sites list");
  if (!poly) cur.fail("pattern needs a polynomial");
  charge_pattern p{supp, *poly};
  if (p.value.homogeneous_parity() != 1)
    throw parse_error("pattern polynomial must be odd", poly_line, poly_col);
  for (const site& s : support(p.value))
    if (!supp.count(s))
      throw parse_error("polynomial escapes its declared sites at " + to_string(s),
                        poly_line, poly_col);
  if (diameter(supp) > range)
    throw parse_error("pattern diameter exceeds the declared range", poly_line, poly_col);
  return p;
}

}  // namespace detail

inline model_data parse_model(const std::string& text) {
  detail::cursor cur{text};
  model_data m;
  m.assignment.dimension = 0;  // must be set before any pattern
  bool have_range = false;
  for (;;) {
    cur.skip_space_and_comments();
    if (cur.done()) break;
    int l = cur.line, c = cur.col;
    std::string key = detail::read_word(cur);
    if (key == "name") {
      m.assignment.name = detail::read_word(cur);
    } else if (key == "dimension") {
      m.assignment.dimension = static_cast<int>(detail::read_int(cur, "dimension"));
    } else if (key == "period") {
      if (m.assignment.dimension < 1)
        throw parse_error("dimension must come before period", l, c);
      m.assignment.period.clear();
      for (int i = 0; i < m.assignment.dimension; ++i)
        m.assignment.period.push_back(static_cast<int>(detail::read_int(cur, "period")));
    } else if (key == "range") {
      m.assignment.range = static_cast<int>(detail::read_int(cur, "range"));
      have_range = true;
    } else if (key == "pattern") {
      if (m.assignment.dimension < 1)
        throw parse_error("dimension must come before patterns", l, c);
      if (!have_range) throw parse_error("range must come before patterns", l, c);
      m.assignment.patterns.push_back(
          detail::read_pattern(cur, m.assignment.dimension, m.assignment.range));
    } else if (key == "suite") {
      static const std::vector<std::string> known = {
          "nilpotent", "leibniz", "susy-algebra", "spectrum",    "states",
          "dynamics",  "face",    "affiliation",  "case2"};
      static const std::vector<std::string> keywords = {
          "name",   "dimension", "period", "range", "pattern",   "suite", "region", "time",
          "tol", "seed", "ensembles", "modes", "cutoff", "grid", "momentum"};
      for (;;) {
        cur.skip_space_and_comments();
        if (cur.done() || !detail::word_char(cur.peek())) break;
        std::size_t sp = cur.pos;
        int sl = cur.line, sc = cur.col;
        std::string w = detail::read_word(cur);
        if (std::find(keywords.begin(), keywords.end(), w) != keywords.end()) {
          cur.pos = sp;
          cur.line = sl;
          cur.col = sc;
          break;
        }
        if (std::find(known.begin(), known.end(), w) == known.end())
          throw parse_error("unknown check '" + w + "'", sl, sc);
        m.suites.push_back(w);
      }
    } else if (key == "region") {
      m.params.region_lo = static_cast<int>(detail::read_int(cur, "region"));
      m.params.region_hi = static_cast<int>(detail::read_int(cur, "region"));
      if (m.params.region_hi < m.params.region_lo)
        throw parse_error("region upper end below lower end", l, c);
    } else if (key == "time") {
      m.params.time = detail::read_real(cur, "time");
    } else if (key == "tol") {
      m.params.tol = detail::read_real(cur, "tol");
      if (m.params.tol <= 0) throw parse_error("tol must be positive", l, c);
    } else if (key == "seed") {
      m.params.seed = static_cast<unsigned>(detail::read_int(cur, "seed"));
    } else if (key == "ensembles") {
      m.params.ensembles = static_cast<int>(detail::read_int(cur, "ensembles"));
    } else if (key == "modes") {
      m.params.modes = static_cast<int>(detail::read_int(cur, "modes"));
    } else if (key == "cutoff") {
      m.params.cutoff = static_cast<int>(detail::read_int(cur, "cutoff"));
    } else if (key == "grid") {
      m.params.grid = static_cast<int>(detail::read_int(cur, "grid"));
    } else if (key == "momentum") {
      m.params.momentum = detail::read_real(cur, "momentum");
    } else {
      throw parse_error("unknown statement '" + key + "'", l, c);
    }
  }
  if (m.assignment.dimension < 1) throw parse_error("model needs a dimension", 1, 1);
  if (m.assignment.period.empty())
    m.assignment.period.assign(m.assignment.dimension, 0);
  std::vector<std::string> issues = validate(m.assignment);
  if (!issues.empty()) throw parse_error(issues.front(), 1, 1);
  return m;
}

inline std::string serialize(const model_data& m) {
  std::ostringstream out;
  out << "name " << (m.assignment.name.empty() ? "unnamed" : m.assignment.name) << "\n";
  out << "dimension " << m.assignment.dimension << "\n";
  out << "period";
  for (int p : m.assignment.period) out << ' ' << p;
  out << "\nrange " << m.assignment.range << "\n";
  for (const charge_pattern& p : m.assignment.patterns) {
    out << "pattern {\n  sites = [";
    bool first = true;
    for (const site& s : p.supp) {
      if (!first) out << ", ";
      first = false;
      if (m.assignment.dimension == 1) {
        out << s.x[0];
      } else {
        out << '(';
        for (std::size_t i = 0; i < s.x.size(); ++i) out << (i ? "," : "") << s.x[i];
        out << ')';
      }
    }
    out << "]\n  polynomial = \"" << to_string(p.value) << "\"\n}\n";
  }
  if (!m.suites.empty()) {
    out << "suite";
    for (const std::string& s : m.suites) out << ' ' << s;
    out << "\n";
  }
  out << "region " << m.params.region_lo << ' ' << m.params.region_hi << "\n";
  out << "time " << m.params.time << "\n";
  out << "tol " << m.params.tol << "\n";
  out << "seed " << m.params.seed << "\n";
  out << "ensembles " << m.params.ensembles << "\n";
  out << "modes " << m.params.modes << "\n";
  out << "cutoff " << m.params.cutoff << "\n";
  out << "grid " << m.params.grid << "\n";
  out << "momentum " << m.params.momentum << "\n";
  return out.str();
}

}  // namespace susylat
