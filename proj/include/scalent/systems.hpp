#pragma once

// Sampleable dynamical systems and base semimetrics. Orbit windows stand in
// for points together with their forward orbit segments; averaging a base
// semimetric over the first n shifts turns m windows into an m x m distance
// matrix, the desk-scale image of the averaged semimetric at time n.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scalent/semimetric.hpp"
#include "scalent/substitution.hpp"

namespace scalent {

namespace detail {

// splitmix64; per-window streams come from statically offsetting the state,
// so window generation is order-independent and reproducible everywhere.
struct SplitMix64 {
  std::uint64_t state;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline SplitMix64 window_stream(std::uint64_t seed, std::uint64_t window) {
  SplitMix64 g{seed ^ (0xD1B54A32D192ED03ULL * (window + 1))};
  g.next();
  return g;
}

}  // namespace detail

inline double golden_ratio_conjugate() { return (std::sqrt(5.0) - 1.0) / 2.0; }

struct SystemSpec {
  enum class Kind {
    BernoulliFinite,
    BernoulliContinuous,
    IrrationalRotation,
    SubstitutionSystem,
  };

  Kind kind = Kind::BernoulliFinite;
  std::vector<double> probabilities;  // BernoulliFinite
  double alpha = 0.0;                 // IrrationalRotation, in (0,1)
  double beta = 0.0;                  // coding arc [0, beta) vs [beta, 1)
  ConstantLengthSubstitution substitution;  // SubstitutionSystem
  // Metadata only, carried for cross-checks and never computed here;
  // +infinity encodes "infinite".
  std::optional<double> known_kolmogorov_entropy;

  static SystemSpec bernoulli(std::vector<double> p) {
    SystemSpec s;
    s.kind = Kind::BernoulliFinite;
    s.probabilities = std::move(p);
    return s;
  }

  static SystemSpec bernoulli_continuous() {
    SystemSpec s;
    s.kind = Kind::BernoulliContinuous;
    return s;
  }

  // Default angle is the golden-ratio conjugate; the default arc boundary
  // beta = 1 - alpha gives the Sturmian coding, which is injective.
  static SystemSpec rotation(double alpha = golden_ratio_conjugate(),
                             std::optional<double> beta = std::nullopt) {
    SystemSpec s;
    s.kind = Kind::IrrationalRotation;
    s.alpha = alpha;
    s.beta = beta.value_or(1.0 - alpha);
    return s;
  }

  static SystemSpec substitution_system(ConstantLengthSubstitution xi) {
    SystemSpec s;
    s.kind = Kind::SubstitutionSystem;
    s.substitution = std::move(xi);
    return s;
  }

  std::size_t alphabet_size() const {
    switch (kind) {
      case Kind::BernoulliFinite: return probabilities.size();
      case Kind::BernoulliContinuous: return 0;
      case Kind::IrrationalRotation: return 2;
      case Kind::SubstitutionSystem: return substitution.alphabet_size;
    }
    return 0;
  }

  bool real_valued() const { return kind == Kind::BernoulliContinuous; }
};

struct OrbitSample {
  std::size_t m = 0;
  std::size_t n_max = 0;
  std::uint64_t seed = 0;
  std::size_t alphabet_size = 0;                      // symbolic kinds only
  std::vector<std::vector<Symbol>> symbol_windows;    // one of these two is
  std::vector<std::vector<double>> real_windows;      // populated

  bool real_valued() const { return !real_windows.empty(); }
};

struct BaseSemimetric {
  enum class Kind { DiscreteCoordinate, AbsCoordinate };

  Kind kind = Kind::DiscreteCoordinate;
  std::size_t depth = 1;   // DiscreteCoordinate: 1 iff first d coordinates differ
  bool generating = true;  // metadata; generating choices are fixed per system

  static BaseSemimetric discrete(std::size_t depth = 1) {
    if (depth < 1) throw std::invalid_argument("BaseSemimetric: depth >= 1");
    return BaseSemimetric{Kind::DiscreteCoordinate, depth, true};
  }

  static BaseSemimetric abs_coordinate() {
    return BaseSemimetric{Kind::AbsCoordinate, 1, true};
  }
};

namespace detail {

inline void validate_spec(const SystemSpec& spec, std::size_t n_max) {
  switch (spec.kind) {
    case SystemSpec::Kind::BernoulliFinite: {
      if (spec.probabilities.empty())
        throw std::invalid_argument("BernoulliFinite: empty probability vector");
      double sum = 0.0;
      for (double p : spec.probabilities) {
        if (!(p > 0.0))
          throw std::invalid_argument("BernoulliFinite: probabilities must be positive");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("BernoulliFinite: probabilities must sum to 1");
      if (spec.probabilities.size() > 256)
        throw std::invalid_argument("BernoulliFinite: alphabet too large");
      break;
    }
    case SystemSpec::Kind::BernoulliContinuous:
      break;
    case SystemSpec::Kind::IrrationalRotation:
      if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
        throw std::invalid_argument("IrrationalRotation: alpha must lie in (0,1)");
      if (!(spec.beta > 0.0 && spec.beta < 1.0))
        throw std::invalid_argument("IrrationalRotation: beta must lie in (0,1)");
      // double precision keeps the accumulated phase error ~ n_max * 2^-52,
      // far below the coding arc resolution for windows up to 2^20
      if (n_max > (std::size_t{1} << 20))
        throw std::invalid_argument("IrrationalRotation: n_max exceeds 2^20");
      break;
    case SystemSpec::Kind::SubstitutionSystem: {
      const auto v = validate_substitution(spec.substitution.rules);
      if (!v.ok())
        throw std::invalid_argument("SubstitutionSystem: " + v.message);
      if (n_max > (std::size_t{1} << 22))
        throw std::invalid_argument("SubstitutionSystem: n_max exceeds prefix capability");
      break;
    }
  }
}

}  // namespace detail

// Draws m orbit windows of length n_max. Deterministic in (spec, m, n_max,
// seed): every window has its own generator stream derived from (seed, index).
// Substitution windows are factors read off a fixed-point prefix of length
// max(10^6, 64 * n_max) at uniform start positions, which approximates the
// unique invariant measure.
inline OrbitSample sample_orbits(const SystemSpec& spec, std::size_t m,
                                 std::size_t n_max, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("sample_orbits: m >= 1");
  if (n_max < 1) throw std::invalid_argument("sample_orbits: n_max >= 1");
  detail::validate_spec(spec, n_max);

  OrbitSample out;
  out.m = m;
  out.n_max = n_max;
  out.seed = seed;
  out.alphabet_size = spec.alphabet_size();

  switch (spec.kind) {
    case SystemSpec::Kind::BernoulliFinite: {
      std::vector<double> cdf(spec.probabilities.size());
      double acc = 0.0;
      for (std::size_t a = 0; a < cdf.size(); ++a) {
        acc += spec.probabilities[a];
        cdf[a] = acc;
      }
      cdf.back() = 1.0;
      out.symbol_windows.assign(m, std::vector<Symbol>(n_max));
      for (std::size_t i = 0; i < m; ++i) {
        auto rng = detail::window_stream(seed, i);
        for (std::size_t k = 0; k < n_max; ++k) {
          const double u = rng.u01();
          std::size_t a = 0;
          while (a + 1 < cdf.size() && u >= cdf[a]) ++a;
          out.symbol_windows[i][k] = static_cast<Symbol>(a);
        }
      }
      break;
    }
    case SystemSpec::Kind::BernoulliContinuous: {
      out.real_windows.assign(m, std::vector<double>(n_max));
      for (std::size_t i = 0; i < m; ++i) {
        auto rng = detail::window_stream(seed, i);
        for (std::size_t k = 0; k < n_max; ++k)
          out.real_windows[i][k] = rng.u01();
      }
      break;
    }
    case SystemSpec::Kind::IrrationalRotation: {
      out.symbol_windows.assign(m, std::vector<Symbol>(n_max));
      for (std::size_t i = 0; i < m; ++i) {
        auto rng = detail::window_stream(seed, i);
        const double x = rng.u01();
        for (std::size_t k = 0; k < n_max; ++k) {
          const double y =
              std::fmod(x + static_cast<double>(k) * spec.alpha, 1.0);
          out.symbol_windows[i][k] = y < spec.beta ? 0 : 1;
        }
      }
      break;
    }
    case SystemSpec::Kind::SubstitutionSystem: {
      const std::size_t L =
          std::max<std::size_t>(1'000'000, 64 * static_cast<std::size_t>(n_max));
      const std::vector<Symbol> prefix =
          fixed_point_prefix(spec.substitution, L);
      const std::size_t range = L - n_max;  // start positions [0, range)
      out.symbol_windows.assign(m, std::vector<Symbol>(n_max));
      for (std::size_t i = 0; i < m; ++i) {
        auto rng = detail::window_stream(seed, i);
        std::size_t start = static_cast<std::size_t>(
            rng.u01() * static_cast<double>(range));
        if (start >= range) start = range - 1;
        for (std::size_t k = 0; k < n_max; ++k)
          out.symbol_windows[i][k] = prefix[start + k];
      }
      break;
    }
  }
  return out;
}

// Averaged distance matrices for an arbitrary per-offset kernel
// rho(x, y, k) >= 0: distance at grid value n is the mean of the kernel over
// offsets 0..n-1. One pass per pair accumulates the running sum and snapshots
// it at each grid value, giving O(m^2 * n_max) total work.
template <class Window, class Kernel>
std::vector<std::pair<std::size_t, EmpiricalTriple>> averaged_matrices_kernel(
    const std::vector<Window>& windows, Kernel&& rho,
    std::span<const std::size_t> n_grid) {
  if (windows.empty()) throw std::invalid_argument("averaged_matrices: no windows");
  if (n_grid.empty()) throw std::invalid_argument("averaged_matrices: empty grid");
  for (std::size_t g = 0; g + 1 < n_grid.size(); ++g)
    if (n_grid[g] >= n_grid[g + 1])
      throw std::invalid_argument("averaged_matrices: grid must be strictly ascending");
  if (n_grid.front() < 1)
    throw std::invalid_argument("averaged_matrices: grid values must be positive");

  const std::size_t m = windows.size();
  const std::size_t n_top = n_grid.back();

  std::vector<std::vector<double>> mats(n_grid.size(),
                                        std::vector<double>(m * m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      double sum = 0.0;
      std::size_t g = 0;
      for (std::size_t k = 0; k < n_top; ++k) {
        sum += rho(windows[i], windows[j], k);
        while (g < n_grid.size() && k + 1 == n_grid[g]) {
          const double d = sum / static_cast<double>(n_grid[g]);
          mats[g][i * m + j] = d;
          mats[g][j * m + i] = d;
          ++g;
        }
      }
    }

  std::vector<std::pair<std::size_t, EmpiricalTriple>> out;
  out.reserve(n_grid.size());
  for (std::size_t g = 0; g < n_grid.size(); ++g)
    out.emplace_back(n_grid[g], EmpiricalTriple::uniform(m, std::move(mats[g])));
  return out;
}

// Averaged matrices for the named base semimetrics. DiscreteCoordinate(d)
// compares d consecutive coordinates per offset via a sliding mismatch count;
// AbsCoordinate takes |x_k - y_k| on real windows.
inline std::vector<std::pair<std::size_t, EmpiricalTriple>>
averaged_distance_matrices(const OrbitSample& sample, const BaseSemimetric& base,
                           std::span<const std::size_t> n_grid) {
  if (n_grid.empty())
    throw std::invalid_argument("averaged_distance_matrices: empty grid");
  const std::size_t depth =
      base.kind == BaseSemimetric::Kind::DiscreteCoordinate ? base.depth : 1;
  if (depth < 1)
    throw std::invalid_argument("averaged_distance_matrices: depth >= 1");
  if (n_grid.back() + depth - 1 > sample.n_max)
    throw std::invalid_argument(
        "averaged_distance_matrices: grid exceeds n_max - (depth - 1)");

  if (base.kind == BaseSemimetric::Kind::AbsCoordinate) {
    if (!sample.real_valued())
      throw std::invalid_argument("AbsCoordinate requires real-valued windows");
    return averaged_matrices_kernel(
        sample.real_windows,
        [](const std::vector<double>& x, const std::vector<double>& y,
           std::size_t k) { return std::abs(x[k] - y[k]); },
        n_grid);
  }

  if (sample.real_valued())
    throw std::invalid_argument("DiscreteCoordinate requires symbolic windows");

  const std::size_t m = sample.symbol_windows.size();
  const std::size_t n_top = n_grid.back();

  std::vector<std::vector<double>> mats(n_grid.size(),
                                        std::vector<double>(m * m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const Symbol* x = sample.symbol_windows[i].data();
      const Symbol* y = sample.symbol_windows[j].data();
      // mismatches within the sliding block [k, k+depth)
      std::size_t block_mismatches = 0;
      for (std::size_t t = 0; t < depth; ++t)
        block_mismatches += x[t] != y[t];
      std::size_t sum = 0;
      std::size_t g = 0;
      for (std::size_t k = 0; k < n_top; ++k) {
        sum += block_mismatches > 0;
        while (g < n_grid.size() && k + 1 == n_grid[g]) {
          const double d = static_cast<double>(sum) /
                           static_cast<double>(n_grid[g]);
          mats[g][i * m + j] = d;
          mats[g][j * m + i] = d;
          ++g;
        }
        if (k + 1 < n_top) {
          block_mismatches -= x[k] != y[k];
          block_mismatches += x[k + depth] != y[k + depth];
        }
      }
    }

  std::vector<std::pair<std::size_t, EmpiricalTriple>> out;
  out.reserve(n_grid.size());
  for (std::size_t g = 0; g < n_grid.size(); ++g)
    out.emplace_back(n_grid[g], EmpiricalTriple::uniform(m, std::move(mats[g])));
  return out;
}

}  // namespace scalent
