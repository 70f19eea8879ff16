#pragma once

// Exact combinatorics of constant-length substitutions: validation,
// primitivity, fixed-point prefixes, height, column number, and the spectrum
// criterion (pure point iff column number equals height). The column number
// is the minimal rank in the semigroup generated by the one-step column maps
// f_j(a) = rules[a][j], which realizes the min over all iterates and
// positions because the (n+1)-step column at position j*q^n + r is the n-step
// column at r composed with f_j.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace scalent {

using Symbol = std::uint8_t;

struct ConstantLengthSubstitution {
  std::size_t alphabet_size = 0;  // s >= 2
  std::size_t length = 0;         // q >= 2
  std::vector<std::vector<Symbol>> rules;
  Symbol seed_letter = 0;  // rules[seed_letter][0] == seed_letter
};

enum class SubstitutionDefect {
  None,
  AlphabetTooSmall,
  LengthMismatch,
  SymbolOutOfRange,
  NonInjective,
  NoSeedLetter,
};

struct SubstitutionValidation {
  SubstitutionDefect defect = SubstitutionDefect::None;
  std::string message;

  bool ok() const { return defect == SubstitutionDefect::None; }
};

struct SubstitutionError : std::runtime_error {
  SubstitutionDefect defect;
  SubstitutionError(SubstitutionDefect d, const std::string& msg)
      : std::runtime_error(msg), defect(d) {}
};

inline SubstitutionValidation validate_substitution(
    const std::vector<std::vector<Symbol>>& rules,
    std::optional<Symbol> seed = std::nullopt) {
  SubstitutionValidation v;
  auto fail = [&](SubstitutionDefect d, const std::string& msg) {
    v.defect = d;
    v.message = msg;
    return v;
  };

  const std::size_t s = rules.size();
  if (s < 2) return fail(SubstitutionDefect::AlphabetTooSmall, "alphabet-too-small: need at least 2 letters");

  const std::size_t q = rules.empty() ? 0 : rules[0].size();
  for (std::size_t a = 0; a < s; ++a)
    if (rules[a].size() != q || q < 2) {
      std::ostringstream os;
      os << "length-mismatch: rule for letter " << a << " has length "
         << rules[a].size() << " (need a common length >= 2)";
      return fail(SubstitutionDefect::LengthMismatch, os.str());
    }

  for (std::size_t a = 0; a < s; ++a)
    for (Symbol x : rules[a])
      if (x >= s) {
        std::ostringstream os;
        os << "symbol-out-of-range: rule for letter " << a
           << " uses symbol " << static_cast<int>(x);
        return fail(SubstitutionDefect::SymbolOutOfRange, os.str());
      }

  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = a + 1; b < s; ++b)
      if (rules[a] == rules[b]) {
        std::ostringstream os;
        os << "non-injective: letters " << a << " and " << b
           << " map to the same word";
        return fail(SubstitutionDefect::NonInjective, os.str());
      }

  if (seed) {
    if (*seed >= s || rules[*seed][0] != *seed)
      return fail(SubstitutionDefect::NoSeedLetter,
                  "no-seed-letter: given seed letter does not start its own image");
  } else {
    bool found = false;
    for (std::size_t a = 0; a < s; ++a)
      if (rules[a][0] == a) {
        found = true;
        break;
      }
    if (!found)
      return fail(SubstitutionDefect::NoSeedLetter,
                  "no-seed-letter: no letter starts its own image");
  }
  return v;
}

// Validates and packages a substitution; when no seed letter is given the
// smallest admissible one is chosen.
inline ConstantLengthSubstitution make_substitution(
    std::vector<std::vector<Symbol>> rules,
    std::optional<Symbol> seed = std::nullopt) {
  const SubstitutionValidation v = validate_substitution(rules, seed);
  if (!v.ok()) throw SubstitutionError(v.defect, v.message);

  ConstantLengthSubstitution xi;
  xi.alphabet_size = rules.size();
  xi.length = rules[0].size();
  if (seed) {
    xi.seed_letter = *seed;
  } else {
    for (std::size_t a = 0; a < rules.size(); ++a)
      if (rules[a][0] == a) {
        xi.seed_letter = static_cast<Symbol>(a);
        break;
      }
  }
  xi.rules = std::move(rules);
  return xi;
}

struct IncidenceResult {
  std::vector<std::vector<std::uint64_t>> matrix;  // [a][b] = count of b in rules[a]
  bool primitive = false;
};

// Primitivity via the Wielandt bound: a nonnegative s x s matrix is primitive
// iff its boolean power (s-1)^2 + 1 is entrywise positive.
inline IncidenceResult incidence_and_primitivity(
    const ConstantLengthSubstitution& xi) {
  const std::size_t s = xi.alphabet_size;
  IncidenceResult r;
  r.matrix.assign(s, std::vector<std::uint64_t>(s, 0));
  for (std::size_t a = 0; a < s; ++a)
    for (Symbol b : xi.rules[a]) ++r.matrix[a][b];

  std::vector<std::vector<char>> base(s, std::vector<char>(s, 0)), power;
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = 0; b < s; ++b) base[a][b] = r.matrix[a][b] > 0;
  power = base;

  auto all_positive = [&](const std::vector<std::vector<char>>& p) {
    for (const auto& row : p)
      for (char x : row)
        if (!x) return false;
    return true;
  };

  const std::size_t wielandt = (s - 1) * (s - 1) + 1;
  for (std::size_t t = 1; t <= wielandt; ++t) {
    if (all_positive(power)) {
      r.primitive = true;
      return r;
    }
    std::vector<std::vector<char>> next(s, std::vector<char>(s, 0));
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t c = 0; c < s; ++c)
        if (power[a][c])
          for (std::size_t b = 0; b < s; ++b)
            if (base[c][b]) next[a][b] = 1;
    power = std::move(next);
  }
  r.primitive = false;
  return r;
}

// Prefix of the one-sided fixed point u = xi(u) starting at the seed letter.
// Iterates the substitution, trimming to just past L each round, and returns
// exactly L symbols.
inline std::vector<Symbol> fixed_point_prefix(
    const ConstantLengthSubstitution& xi, std::size_t L) {
  if (L == 0) throw std::invalid_argument("fixed_point_prefix: L must be positive");
  std::vector<Symbol> word{xi.seed_letter};
  while (word.size() < L) {
    std::vector<Symbol> next;
    next.reserve(std::min(L + xi.length, word.size() * xi.length));
    for (Symbol a : word) {
      const auto& img = xi.rules[a];
      next.insert(next.end(), img.begin(), img.end());
      if (next.size() >= L) break;
    }
    word = std::move(next);
  }
  word.resize(L);
  return word;
}

namespace detail {

inline void require_primitive(const ConstantLengthSubstitution& xi,
                              const char* op) {
  if (!incidence_and_primitivity(xi).primitive)
    throw std::invalid_argument(std::string(op) +
                                ": substitution is not primitive");
}

}  // namespace detail

// Minimal rank over the closure of the one-step column maps under
// composition. The closure has at most s^s elements; rank 1 ends the search
// early since it is the global minimum.
inline std::size_t column_number(const ConstantLengthSubstitution& xi) {
  detail::require_primitive(xi, "column_number");
  const std::size_t s = xi.alphabet_size;

  auto rank = [s](const std::vector<Symbol>& f) {
    std::vector<char> seen(s, 0);
    std::size_t r = 0;
    for (Symbol v : f)
      if (!seen[v]) {
        seen[v] = 1;
        ++r;
      }
    return r;
  };

  std::vector<std::vector<Symbol>> generators(xi.length,
                                              std::vector<Symbol>(s));
  for (std::size_t j = 0; j < xi.length; ++j)
    for (std::size_t a = 0; a < s; ++a) generators[j][a] = xi.rules[a][j];

  std::set<std::vector<Symbol>> closure;
  std::queue<std::vector<Symbol>> frontier;
  std::size_t best = s;
  for (const auto& g : generators)
    if (closure.insert(g).second) {
      frontier.push(g);
      best = std::min(best, rank(g));
    }

  while (!frontier.empty() && best > 1) {
    const std::vector<Symbol> f = std::move(frontier.front());
    frontier.pop();
    for (const auto& g : generators) {
      std::vector<Symbol> h(s);  // f after g
      for (std::size_t a = 0; a < s; ++a) h[a] = f[g[a]];
      if (closure.insert(h).second) {
        best = std::min(best, rank(h));
        frontier.push(h);
      }
    }
  }
  return best;
}

struct HeightResult {
  std::size_t height = 1;
  std::size_t prefix_length = 0;  // prefix actually inspected
};

// Height: the largest divisor, coprime to q, of the gcd of all return
// positions of the initial letter. The gcd is evaluated on prefixes of
// doubling length until it is stable across two consecutive doublings (and
// the prefix is at least q^4 * s long); it is nonincreasing and
// integer-valued, so stabilization is observable. The result is additionally
// capped by the alphabet size.
inline HeightResult height(const ConstantLengthSubstitution& xi) {
  detail::require_primitive(xi, "height");
  const std::size_t s = xi.alphabet_size;
  const std::size_t q = xi.length;

  std::size_t L = 1;
  for (int i = 0; i < 4; ++i) L *= q;  // q^4
  const std::size_t floor_length = L * s;
  const std::size_t cap = std::size_t{1} << 26;

  std::vector<std::uint64_t> history;
  std::uint64_t g = 0;
  for (;; L *= 2) {
    if (L > cap)
      throw std::logic_error("height: initial letter does not recur (not primitive?)");
    const std::vector<Symbol> u = fixed_point_prefix(xi, L);
    g = 0;
    for (std::size_t n = 1; n < u.size(); ++n)
      if (u[n] == u[0]) g = std::gcd(g, static_cast<std::uint64_t>(n));
    history.push_back(g);
    const std::size_t h = history.size();
    if (g > 0 && L >= floor_length && h >= 3 && history[h - 1] == history[h - 2] &&
        history[h - 2] == history[h - 3])
      break;
  }

  // Largest divisor of g coprime to q: strip every prime factor shared with q.
  std::uint64_t h = g;
  for (std::uint64_t t = std::gcd(h, static_cast<std::uint64_t>(q)); t > 1;
       t = std::gcd(h, static_cast<std::uint64_t>(q)))
    h /= t;
  if (h > s)
    for (std::size_t d = s; d >= 1; --d)
      if (h % d == 0) {
        h = d;
        break;
      }

  return HeightResult{static_cast<std::size_t>(h), L};
}

enum class Spectrum { PurePoint, NotPurePoint };

inline Spectrum classify_spectrum(const ConstantLengthSubstitution& xi) {
  return column_number(xi) == height(xi).height ? Spectrum::PurePoint
                                                : Spectrum::NotPurePoint;
}

// Predicted entropy growth 1 + (c - h) * log2(n). Base 2 keeps the values in
// bits; the growth class itself does not depend on the base.
inline std::vector<double> predicted_scaling_sequence(
    const ConstantLengthSubstitution& xi, const std::vector<std::size_t>& ns) {
  const double c = static_cast<double>(column_number(xi));
  const double h = static_cast<double>(height(xi).height);
  std::vector<double> out;
  out.reserve(ns.size());
  for (std::size_t n : ns) {
    if (n < 1) throw std::invalid_argument("predicted_scaling_sequence: n >= 1");
    out.push_back(1.0 + (c - h) * std::log2(static_cast<double>(n)));
  }
  return out;
}

struct SubstitutionReport {
  bool primitive = false;
  std::vector<std::vector<std::uint64_t>> incidence;
  std::optional<std::size_t> height;
  std::optional<std::size_t> column_number;
  std::optional<Spectrum> spectrum;
  std::size_t height_prefix_length = 0;
  std::string predicted_scaling;  // e.g. "h_n = 1 + 1*log2(n)"
};

inline SubstitutionReport analyze_substitution(
    const ConstantLengthSubstitution& xi) {
  SubstitutionReport rep;
  const IncidenceResult inc = incidence_and_primitivity(xi);
  rep.primitive = inc.primitive;
  rep.incidence = inc.matrix;
  if (!inc.primitive) return rep;

  const HeightResult h = height(xi);
  rep.height = h.height;
  rep.height_prefix_length = h.prefix_length;
  rep.column_number = column_number(xi);
  rep.spectrum = *rep.column_number == *rep.height ? Spectrum::PurePoint
                                                   : Spectrum::NotPurePoint;
  std::ostringstream os;
  if (*rep.column_number == *rep.height)
    os << "h_n = 1";
  else
    os << "h_n = 1 + " << (*rep.column_number - *rep.height) << "*log2(n)";
  rep.predicted_scaling = os.str();
  return rep;
}

}  // namespace scalent
