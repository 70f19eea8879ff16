#pragma once

// Entropy-curve experiments over (n, epsilon) grids and their growth-class
// verdicts. A curve tabulates certified bounds on the epsilon-entropy of the
// averaged semimetric at each grid point; growth against n is then fitted
// against the three expected shapes (bounded, logarithmic, linear).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "scalent/epsilon_entropy.hpp"
#include "scalent/semimetric.hpp"
#include "scalent/systems.hpp"

namespace scalent {

enum class Estimator { ExactIfSmall, BoundsOnly, ExactStrict };

inline std::string estimator_name(Estimator e) {
  switch (e) {
    case Estimator::ExactIfSmall: return "exact-if-small";
    case Estimator::BoundsOnly: return "bounds-only";
    case Estimator::ExactStrict: return "exact";
  }
  return "?";
}

struct ExperimentConfig {
  SystemSpec system;
  BaseSemimetric base;
  std::size_t m = 512;
  std::vector<std::size_t> n_grid;     // strictly ascending
  std::vector<double> epsilon_grid;    // strictly descending, in (0, 1]
  std::uint64_t seed = 0;
  Estimator estimator = Estimator::ExactIfSmall;
  EntropyOptions entropy;
};

inline std::vector<std::size_t> geometric_grid(std::size_t start,
                                               std::size_t stop,
                                               std::size_t factor = 2) {
  if (start < 1 || stop < start || factor < 2)
    throw std::invalid_argument("geometric_grid: need 1 <= start <= stop, factor >= 2");
  std::vector<std::size_t> g;
  for (std::size_t n = start; n <= stop; n *= factor) g.push_back(n);
  return g;
}

inline std::vector<std::size_t> default_n_grid() { return geometric_grid(16, 4096); }
inline std::vector<double> default_epsilon_grid() { return {0.4, 0.3, 0.2, 0.1}; }

namespace detail {

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::string real_token(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

inline std::string system_token(const SystemSpec& spec) {
  std::ostringstream os;
  switch (spec.kind) {
    case SystemSpec::Kind::BernoulliFinite:
      os << "bernoulli_finite:";
      for (std::size_t i = 0; i < spec.probabilities.size(); ++i)
        os << (i ? "," : "") << real_token(spec.probabilities[i]);
      break;
    case SystemSpec::Kind::BernoulliContinuous:
      os << "bernoulli_continuous";
      break;
    case SystemSpec::Kind::IrrationalRotation:
      os << "rotation:" << real_token(spec.alpha) << ":" << real_token(spec.beta);
      break;
    case SystemSpec::Kind::SubstitutionSystem: {
      os << "substitution:";
      const auto& xi = spec.substitution;
      for (std::size_t a = 0; a < xi.rules.size(); ++a) {
        if (a) os << ",";
        for (Symbol x : xi.rules[a]) os << static_cast<int>(x) << ".";
      }
      os << ":seed" << static_cast<int>(xi.seed_letter);
      break;
    }
  }
  return os.str();
}

inline std::string base_token(const BaseSemimetric& base) {
  return base.kind == BaseSemimetric::Kind::DiscreteCoordinate
             ? "discrete:" + std::to_string(base.depth)
             : std::string("abs");
}

}  // namespace detail

inline std::string canonical_config_string(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "system=" << detail::system_token(c.system)
     << ";base=" << detail::base_token(c.base) << ";m=" << c.m << ";n=";
  for (std::size_t i = 0; i < c.n_grid.size(); ++i)
    os << (i ? "," : "") << c.n_grid[i];
  os << ";eps=";
  for (std::size_t i = 0; i < c.epsilon_grid.size(); ++i)
    os << (i ? "," : "") << detail::real_token(c.epsilon_grid[i]);
  os << ";seed=" << c.seed << ";estimator=" << estimator_name(c.estimator)
     << ";exact_limit=" << c.entropy.exact_limit
     << ";slack=" << detail::real_token(c.entropy.slack);
  return os.str();
}

inline std::uint64_t config_fingerprint(const ExperimentConfig& c) {
  return detail::fnv1a64(canonical_config_string(c));
}

struct CurveRow {
  std::size_t n = 0;
  double epsilon = 0.0;
  std::size_t k_lower = 1;
  std::size_t k_upper = 1;
  double h_lower_bits = 0.0;
  double h_upper_bits = 0.0;
};

struct EntropyCurve {
  std::vector<CurveRow> rows;  // n ascending outer, epsilon grid order inner
  std::string estimator;
  std::uint64_t seed = 0;
  std::uint64_t fingerprint = 0;
};

namespace detail {

inline void validate_experiment_config(const ExperimentConfig& c) {
  if (c.m < 1) throw std::invalid_argument("config: m >= 1 required");
  if (c.n_grid.empty()) throw std::invalid_argument("config: empty n grid");
  for (std::size_t i = 0; i + 1 < c.n_grid.size(); ++i)
    if (c.n_grid[i] >= c.n_grid[i + 1])
      throw std::invalid_argument("config: n grid must be strictly ascending");
  if (c.n_grid.front() < 1) throw std::invalid_argument("config: n >= 1");
  if (c.epsilon_grid.empty()) throw std::invalid_argument("config: empty epsilon grid");
  for (double e : c.epsilon_grid)
    if (!(e > 0.0 && e <= 1.0))
      throw std::invalid_argument("config: epsilon values must lie in (0, 1]");
  for (std::size_t i = 0; i + 1 < c.epsilon_grid.size(); ++i)
    if (c.epsilon_grid[i] <= c.epsilon_grid[i + 1])
      throw std::invalid_argument("config: epsilon grid must be strictly descending");
}

struct BoundPair {
  std::size_t k_lower = 1, k_upper = 1;
};

// Evaluates the bound pair on one matrix over the whole epsilon grid
// (descending) and applies the monotone envelope: a partition certified at a
// smaller epsilon is valid at any larger one, and a packing bound at a larger
// epsilon bounds the entropy at any smaller one. The envelope keeps the
// emitted k's nonincreasing in epsilon, as the definition requires, and can
// only tighten the interval.
inline std::vector<BoundPair> bounds_over_grid(const EmpiricalTriple& t,
                                               std::span<const double> eps_grid,
                                               bool exact,
                                               const EntropyOptions& opt) {
  std::vector<BoundPair> out(eps_grid.size());
  for (std::size_t e = 0; e < eps_grid.size(); ++e) {
    if (exact) {
      const EntropyEstimate est = epsilon_entropy_exact(t, eps_grid[e], opt);
      out[e] = {est.k_lower, est.k_upper};
    } else {
      out[e] = {epsilon_entropy_lower(t, eps_grid[e], opt).k_lower,
                epsilon_entropy_greedy(t, eps_grid[e], opt).k_upper};
    }
  }
  for (std::size_t e = out.size(); e-- > 1;)
    out[e - 1].k_upper = std::min(out[e - 1].k_upper, out[e].k_upper);
  for (std::size_t e = 1; e < out.size(); ++e)
    out[e].k_lower = std::max(out[e].k_lower, out[e - 1].k_lower);
  return out;
}

}  // namespace detail

// Runs one experiment: samples orbits once, builds the averaged matrices per
// grid n, and evaluates the epsilon-entropy (exact on small instances, bound
// pair otherwise) on every grid cell. Deterministic in the config.
inline EntropyCurve run_experiment(const ExperimentConfig& config) {
  detail::validate_experiment_config(config);

  const std::size_t depth =
      config.base.kind == BaseSemimetric::Kind::DiscreteCoordinate
          ? config.base.depth
          : 1;
  const std::size_t n_max = config.n_grid.back() + depth - 1;

  const bool exact =
      (config.estimator != Estimator::BoundsOnly) &&
      config.m <= config.entropy.exact_limit;
  if (config.estimator == Estimator::ExactStrict && !exact)
    throw InstanceTooLarge("m = " + std::to_string(config.m) +
                           " exceeds exact_limit = " +
                           std::to_string(config.entropy.exact_limit) +
                           " under the exact estimator");

  const OrbitSample sample =
      sample_orbits(config.system, config.m, n_max, config.seed);
  const auto mats =
      averaged_distance_matrices(sample, config.base, config.n_grid);

  EntropyCurve curve;
  curve.estimator = estimator_name(config.estimator);
  curve.seed = config.seed;
  curve.fingerprint = config_fingerprint(config);
  curve.rows.reserve(config.n_grid.size() * config.epsilon_grid.size());

  for (const auto& [n, triple] : mats) {
    const auto bounds = detail::bounds_over_grid(
        triple, config.epsilon_grid, exact, config.entropy);
    for (std::size_t e = 0; e < config.epsilon_grid.size(); ++e) {
      CurveRow row;
      row.n = n;
      row.epsilon = config.epsilon_grid[e];
      row.k_lower = bounds[e].k_lower;
      row.k_upper = bounds[e].k_upper;
      row.h_lower_bits = std::log2(static_cast<double>(row.k_lower));
      row.h_upper_bits = std::log2(static_cast<double>(row.k_upper));
      curve.rows.push_back(row);
    }
  }
  return curve;
}

enum class GrowthClass { Bounded, Logarithmic, Linear, Indeterminate };

inline std::string growth_class_name(GrowthClass g) {
  switch (g) {
    case GrowthClass::Bounded: return "Bounded";
    case GrowthClass::Logarithmic: return "Logarithmic";
    case GrowthClass::Linear: return "Linear";
    case GrowthClass::Indeterminate: return "Indeterminate";
  }
  return "?";
}

struct GrowthOptions {
  double margin = 0.10;     // dominance margin for model selection
  double rss_floor = 1e-12; // treats numerically-zero residuals as ties
};

struct GrowthClassification {
  GrowthClass klass = GrowthClass::Indeterminate;
  double slope = 0.0;      // bits per log2 n, when Logarithmic
  double rate = 0.0;       // bits per n, when Linear
  double log_slope = 0.0;  // log-model slope, always reported
  double rss_const = 0.0, rss_log = 0.0, rss_linear = 0.0;
  double epsilon = 0.0;
  std::size_t n_points = 0;
};

namespace detail {

struct LineFit {
  double intercept = 0.0, slope = 0.0, rss = 0.0;
};

inline LineFit least_squares(const std::vector<double>& x,
                             const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    f.rss += r * r;
  }
  return f;
}

}  // namespace detail

// Least-squares fit of the upper entropy bound against the three candidate
// models {const, a + b*log2 n, a + b*n}. The constant model wins ties against
// the two-parameter models (it is nested in both); between log and linear the
// winner needs a `margin` residual advantage, otherwise the verdict is
// Indeterminate.
inline GrowthClassification classify_growth(const EntropyCurve& curve,
                                            double epsilon,
                                            const GrowthOptions& opt = {}) {
  std::vector<double> ns, hs;
  for (const CurveRow& r : curve.rows)
    if (r.epsilon == epsilon) {
      ns.push_back(static_cast<double>(r.n));
      hs.push_back(r.h_upper_bits);
    }
  if (ns.size() < 5)
    throw std::invalid_argument(
        "classify_growth: need at least 5 grid points at the chosen epsilon");

  GrowthClassification g;
  g.epsilon = epsilon;
  g.n_points = ns.size();

  double mean = 0.0;
  for (double h : hs) mean += h;
  mean /= static_cast<double>(hs.size());
  for (double h : hs) g.rss_const += (h - mean) * (h - mean);

  std::vector<double> logs(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) logs[i] = std::log2(ns[i]);
  const detail::LineFit logfit = detail::least_squares(logs, hs);
  const detail::LineFit linfit = detail::least_squares(ns, hs);
  g.rss_log = logfit.rss;
  g.rss_linear = linfit.rss;
  g.log_slope = logfit.slope;

  const double rc = std::max(g.rss_const, opt.rss_floor);
  const double rl = std::max(g.rss_log, opt.rss_floor);
  const double rn = std::max(g.rss_linear, opt.rss_floor);

  if (rc <= (1.0 + opt.margin) * std::min(rl, rn)) {
    g.klass = GrowthClass::Bounded;
  } else if (rl <= (1.0 - opt.margin) * rn && logfit.slope > 0.0) {
    g.klass = GrowthClass::Logarithmic;
    g.slope = logfit.slope;
  } else if (rn <= (1.0 - opt.margin) * rl && linfit.slope > 0.0) {
    g.klass = GrowthClass::Linear;
    g.rate = linfit.slope;
  } else {
    g.klass = GrowthClass::Indeterminate;
  }
  return g;
}

struct CurveVerdict {
  std::vector<GrowthClassification> per_epsilon;  // epsilon descending
  GrowthClass verdict = GrowthClass::Indeterminate;
};

// Per-epsilon classifications plus an overall verdict that requires the two
// smallest epsilon values to agree (the limits cannot be observed, so
// cross-epsilon agreement is the practical surrogate).
inline CurveVerdict classify_curve(const EntropyCurve& curve,
                                   const GrowthOptions& opt = {}) {
  std::vector<double> eps;
  for (const CurveRow& r : curve.rows)
    if (std::find(eps.begin(), eps.end(), r.epsilon) == eps.end())
      eps.push_back(r.epsilon);
  std::sort(eps.begin(), eps.end(), std::greater<>());
  if (eps.empty()) throw std::invalid_argument("classify_curve: empty curve");

  CurveVerdict v;
  for (double e : eps) v.per_epsilon.push_back(classify_growth(curve, e, opt));
  if (eps.size() == 1) {
    v.verdict = v.per_epsilon[0].klass;
  } else {
    const GrowthClass a = v.per_epsilon[v.per_epsilon.size() - 1].klass;
    const GrowthClass b = v.per_epsilon[v.per_epsilon.size() - 2].klass;
    v.verdict = a == b ? a : GrowthClass::Indeterminate;
  }
  return v;
}

struct InvarianceConfig {
  SystemSpec system;
  BaseSemimetric base1, base2;
  std::size_t m = 512;
  std::vector<std::size_t> n_grid;
  double epsilon1 = 0.2, epsilon2 = 0.2;
  std::uint64_t seed = 0;
  double ratio_bound = 4.0;  // pass iff all ratios lie in [1/C, C]
  Estimator estimator = Estimator::ExactIfSmall;
  EntropyOptions entropy;
};

struct RatioRow {
  std::size_t n = 0;
  double h1 = 0.0, h2 = 0.0, ratio = 0.0;
};

struct RatioReport {
  enum class Status { Ok, AllZero };
  Status status = Status::Ok;
  std::vector<RatioRow> rows;
  std::size_t dropped_leading = 0;
  double min_ratio = 0.0, max_ratio = 0.0;
  double ratio_bound = 4.0;
  bool pass = false;
};

inline std::string canonical_config_string(const InvarianceConfig& c) {
  std::ostringstream os;
  os << "invariance;system=" << detail::system_token(c.system)
     << ";base1=" << detail::base_token(c.base1)
     << ";base2=" << detail::base_token(c.base2) << ";m=" << c.m << ";n=";
  for (std::size_t i = 0; i < c.n_grid.size(); ++i)
    os << (i ? "," : "") << c.n_grid[i];
  os << ";eps1=" << detail::real_token(c.epsilon1)
     << ";eps2=" << detail::real_token(c.epsilon2) << ";seed=" << c.seed
     << ";bound=" << detail::real_token(c.ratio_bound)
     << ";estimator=" << estimator_name(c.estimator);
  return os.str();
}

// Empirical semimetric-independence check: the same sampled orbits are
// measured under two generating bases and the per-n ratio of upper entropy
// bounds must stay inside [1/C, C]. Leading rows where either curve is still
// at zero are dropped; if nothing is left the comparison is undefined.
inline RatioReport invariance_test(const InvarianceConfig& config) {
  if (config.m < 1) throw std::invalid_argument("invariance: m >= 1");
  if (config.n_grid.empty()) throw std::invalid_argument("invariance: empty grid");
  if (!(config.epsilon1 > 0.0) || !(config.epsilon2 > 0.0))
    throw std::invalid_argument("invariance: epsilons must be positive");
  if (!(config.ratio_bound >= 1.0))
    throw std::invalid_argument("invariance: ratio bound must be >= 1");

  const auto depth_of = [](const BaseSemimetric& b) {
    return b.kind == BaseSemimetric::Kind::DiscreteCoordinate ? b.depth
                                                              : std::size_t{1};
  };
  const std::size_t depth = std::max(depth_of(config.base1), depth_of(config.base2));
  const std::size_t n_max = config.n_grid.back() + depth - 1;

  const OrbitSample sample =
      sample_orbits(config.system, config.m, n_max, config.seed);
  const auto mats1 = averaged_distance_matrices(sample, config.base1, config.n_grid);
  const auto mats2 = averaged_distance_matrices(sample, config.base2, config.n_grid);

  const bool exact = (config.estimator != Estimator::BoundsOnly) &&
                     config.m <= config.entropy.exact_limit;
  if (config.estimator == Estimator::ExactStrict && !exact)
    throw InstanceTooLarge("invariance: m exceeds exact_limit under the exact estimator");

  auto upper_bits = [&](const EmpiricalTriple& t, double eps) {
    const std::size_t k = exact ? epsilon_entropy_exact(t, eps, config.entropy).k_upper
                                : epsilon_entropy_greedy(t, eps, config.entropy).k_upper;
    return std::log2(static_cast<double>(k));
  };

  RatioReport rep;
  rep.ratio_bound = config.ratio_bound;
  std::vector<RatioRow> all;
  for (std::size_t g = 0; g < config.n_grid.size(); ++g) {
    RatioRow row;
    row.n = config.n_grid[g];
    row.h1 = upper_bits(mats1[g].second, config.epsilon1);
    row.h2 = upper_bits(mats2[g].second, config.epsilon2);
    all.push_back(row);
  }

  std::size_t first = 0;
  while (first < all.size() && (all[first].h1 == 0.0 || all[first].h2 == 0.0))
    ++first;
  rep.dropped_leading = first;
  if (first == all.size()) {
    rep.status = RatioReport::Status::AllZero;
    rep.pass = false;
    return rep;
  }

  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0.0;
  for (std::size_t i = first; i < all.size(); ++i) {
    RatioRow row = all[i];
    if (row.h1 == 0.0 || row.h2 == 0.0) {
      // a zero after the curves have both left zero breaks the comparison
      rep.status = RatioReport::Status::AllZero;
      rep.pass = false;
      return rep;
    }
    row.ratio = row.h1 / row.h2;
    rep.min_ratio = std::min(rep.min_ratio, row.ratio);
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    rep.rows.push_back(row);
  }
  rep.pass = rep.max_ratio <= config.ratio_bound &&
             rep.min_ratio >= 1.0 / config.ratio_bound;
  return rep;
}

struct SequentialEntropy {
  double bits_per_term = 0.0;
  std::size_t distinct_tuples = 0;
  // plug-in estimates are biased once the observed support gets comparable
  // to the sample count; flagged at support > m/10
  bool support_warning = false;
};

// Plug-in Shannon entropy of the observed tuples (depth-d blocks at the given
// offsets), in bits per term.
inline SequentialEntropy sequential_entropy_estimate(
    const OrbitSample& sample, std::size_t depth,
    std::span<const std::size_t> offsets, std::size_t terms) {
  if (sample.real_valued())
    throw std::invalid_argument("sequential_entropy: needs symbolic windows");
  if (depth < 1) throw std::invalid_argument("sequential_entropy: depth >= 1");
  if (terms < 1 || terms > offsets.size())
    throw std::invalid_argument("sequential_entropy: 1 <= terms <= |offsets|");
  for (std::size_t i = 0; i < terms; ++i) {
    if (offsets[i] < 1)
      throw std::invalid_argument("sequential_entropy: offsets must be positive");
    if (i + 1 < terms && offsets[i] >= offsets[i + 1])
      throw std::invalid_argument("sequential_entropy: offsets must be ascending");
  }
  if (offsets[terms - 1] + depth > sample.n_max)
    throw std::invalid_argument("sequential_entropy: offsets out of range");

  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& w : sample.symbol_windows) {
    std::string key;
    key.reserve(terms * depth);
    for (std::size_t i = 0; i < terms; ++i)
      for (std::size_t t = 0; t < depth; ++t)
        key.push_back(static_cast<char>(w[offsets[i] + t]));
    ++counts[key];
  }

  const double m = static_cast<double>(sample.symbol_windows.size());
  double bits = 0.0;
  for (const auto& [key, c] : counts) {
    const double p = static_cast<double>(c) / m;
    bits -= p * std::log2(p);
  }

  SequentialEntropy s;
  s.bits_per_term = bits / static_cast<double>(terms);
  s.distinct_tuples = counts.size();
  s.support_warning =
      counts.size() * 10 > sample.symbol_windows.size();
  return s;
}

}  // namespace scalent
