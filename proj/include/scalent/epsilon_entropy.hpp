#pragma once

// Epsilon-entropy of a finite semimetric triple: the least k such that the
// points split into X_0, X_1, ..., X_k with weight(X_0) < eps and
// diam(X_j) < eps for j = 1..k; the entropy is log2(k). Computed exactly on
// small instances and bracketed by a greedy ball cover (upper) and a packing
// bound (lower) on large ones. Both inequalities are strict; comparisons use
// a configurable slack so that ties at eps go to the parts, not X_0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "scalent/semimetric.hpp"

namespace scalent {

struct EntropyOptions {
  std::size_t exact_limit = 14;
  double slack = 1e-12;
};

struct InstanceTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EntropyEstimate {
  double epsilon = 0.0;
  std::size_t k_lower = 1;
  std::size_t k_upper = 1;
  bool exact = false;
  // Empty when absent; otherwise one label per point, 0 = X_0, 1..k_upper.
  std::vector<int> partition;

  double h_lower_bits() const { return std::log2(static_cast<double>(k_lower)); }
  double h_upper_bits() const { return std::log2(static_cast<double>(k_upper)); }
};

namespace detail {

inline void require_positive_epsilon(double epsilon) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("epsilon must be positive");
}

// Canonical point order for the exact search: weight descending, then index.
inline std::vector<std::size_t> weight_order(const EmpiricalTriple& t) {
  std::vector<std::size_t> order(t.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return t.weight(a) > t.weight(b);
  });
  return order;
}

}  // namespace detail

// Maximal eps-separated subset, built by scanning points in index order and
// keeping a point iff it is not strictly within eps of every point kept so
// far. Two kept points can never share a part of diameter < eps.
inline std::vector<std::size_t> separated_set(const EmpiricalTriple& t,
                                              double epsilon,
                                              double slack = 1e-12) {
  detail::require_positive_epsilon(epsilon);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < t.size(); ++i) {
    bool far = true;
    for (std::size_t j : kept)
      if (strictly_less(t.dist(i, j), epsilon, slack)) {
        far = false;
        break;
      }
    if (far) kept.push_back(i);
  }
  return kept;
}

// Packing bound for a given separated set: X_0 can absorb at most the largest
// count r of lightest set members whose cumulative weight stays < eps; every
// other member needs its own part.
inline std::size_t packing_bound(const EmpiricalTriple& t,
                                 const std::vector<std::size_t>& separated,
                                 double epsilon, double slack = 1e-12) {
  std::vector<double> ws;
  ws.reserve(separated.size());
  for (std::size_t i : separated) ws.push_back(t.weight(i));
  std::sort(ws.begin(), ws.end());
  double cum = 0.0;
  std::size_t r = 0;
  for (double w : ws) {
    if (!strictly_less(cum + w, epsilon, slack)) break;
    cum += w;
    ++r;
  }
  const std::size_t bound = separated.size() - r;
  return std::max<std::size_t>(1, bound);
}

inline EntropyEstimate epsilon_entropy_lower(const EmpiricalTriple& t,
                                             double epsilon,
                                             const EntropyOptions& opt = {}) {
  detail::require_positive_epsilon(epsilon);
  EntropyEstimate e;
  e.epsilon = epsilon;
  e.exact = false;
  e.k_lower = packing_bound(t, separated_set(t, epsilon, opt.slack), epsilon,
                            opt.slack);
  e.k_upper = t.size();  // singletons always work
  return e;
}

// Greedy cover by balls of strict radius eps/2: while the remaining weight is
// >= eps, pick the center whose ball holds the most remaining weight
// (tie-break: lowest point index), turn the ball into a part, and repeat.
// The triangle inequality makes every such part have diameter < eps.
inline EntropyEstimate epsilon_entropy_greedy(const EmpiricalTriple& t,
                                              double epsilon,
                                              const EntropyOptions& opt = {}) {
  detail::require_positive_epsilon(epsilon);
  const std::size_t m = t.size();
  const double radius = epsilon / 2.0;

  std::vector<char> in_ball(m * m);
  std::vector<double> ball_weight(m, 0.0);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t p = 0; p < m; ++p) {
      const bool in = strictly_less(t.dist(c, p), radius, opt.slack);
      in_ball[c * m + p] = in;
      if (in) ball_weight[c] += t.weight(p);
    }

  std::vector<int> labels(m, 0);
  std::vector<char> remaining(m, 1);
  double remaining_weight =
      std::accumulate(t.weights().begin(), t.weights().end(), 0.0);
  std::size_t k = 0;

  while (!strictly_less(remaining_weight, epsilon, opt.slack)) {
    std::size_t best = m;
    double best_weight = -1.0;
    for (std::size_t c = 0; c < m; ++c)
      if (remaining[c] && ball_weight[c] > best_weight) {
        best = c;
        best_weight = ball_weight[c];
      }
    if (best == m) break;  // unreachable: remaining weight >= eps > 0
    ++k;
    for (std::size_t p = 0; p < m; ++p)
      if (remaining[p] && in_ball[best * m + p]) {
        labels[p] = static_cast<int>(k);
        remaining[p] = 0;
        remaining_weight -= t.weight(p);
        for (std::size_t c = 0; c < m; ++c)
          if (in_ball[c * m + p]) ball_weight[c] -= t.weight(p);
      }
  }

  EntropyEstimate e;
  e.epsilon = epsilon;
  e.exact = false;
  e.k_lower = 1;
  e.k_upper = std::max<std::size_t>(1, k);
  e.partition = std::move(labels);
  return e;
}

namespace detail {

// Depth-first feasibility search for a fixed part budget. Points are visited
// in canonical order; choices are tried parts 0..P-1 in creation order, then
// a fresh part, then X_0. The first complete assignment found is the
// canonical witness, independent of any pruning (pruned branches contain no
// witness for this budget).
class ExactSearch {
public:
  ExactSearch(const EmpiricalTriple& t, double epsilon,
              const EntropyOptions& opt)
      : t_(t),
        epsilon_(epsilon),
        slack_(opt.slack),
        order_(weight_order(t)),
        prune_(t.size() > 8),
        separated_(separated_set(t, epsilon, opt.slack)) {
    is_separated_.assign(t.size(), 0);
    for (std::size_t i : separated_) is_separated_[i] = 1;
  }

  bool feasible(std::size_t k, std::vector<int>& labels_out) {
    budget_ = k;
    labels_.assign(t_.size(), 0);
    parts_.clear();
    part_has_separated_.clear();
    x0_weight_ = 0.0;
    if (!dfs(0)) return false;
    labels_out = labels_;
    return true;
  }

private:
  bool dfs(std::size_t depth) {
    if (depth == order_.size()) return true;
    if (prune_ && !packing_feasible(depth)) return false;

    const std::size_t p = order_[depth];

    for (std::size_t j = 0; j < parts_.size(); ++j)
      if (compatible(p, parts_[j])) {
        parts_[j].push_back(p);
        const char had = part_has_separated_[j];
        part_has_separated_[j] |= is_separated_[p];
        labels_[p] = static_cast<int>(j + 1);
        if (dfs(depth + 1)) return true;
        part_has_separated_[j] = had;
        parts_[j].pop_back();
      }

    if (parts_.size() < budget_) {
      parts_.push_back({p});
      part_has_separated_.push_back(is_separated_[p]);
      labels_[p] = static_cast<int>(parts_.size());
      if (dfs(depth + 1)) return true;
      parts_.pop_back();
      part_has_separated_.pop_back();
    }

    if (strictly_less(x0_weight_ + t_.weight(p), epsilon_, slack_)) {
      x0_weight_ += t_.weight(p);
      labels_[p] = 0;
      if (dfs(depth + 1)) return true;
      x0_weight_ -= t_.weight(p);
    }

    labels_[p] = 0;
    return false;
  }

  bool compatible(std::size_t p, const std::vector<std::size_t>& part) const {
    for (std::size_t q : part)
      if (!strictly_less(t_.dist(p, q), epsilon_, slack_)) return false;
    return true;
  }

  // Optimistic capacity check for the still-unassigned separated points: each
  // needs a separated-free part or a slot in X_0. Only cuts branches that
  // cannot complete within the budget.
  bool packing_feasible(std::size_t depth) const {
    std::vector<double> ws;
    for (std::size_t d = depth; d < order_.size(); ++d)
      if (is_separated_[order_[d]]) ws.push_back(t_.weight(order_[d]));
    if (ws.empty()) return true;

    std::size_t free_parts = budget_ - parts_.size();
    for (char h : part_has_separated_)
      if (!h) ++free_parts;

    std::sort(ws.begin(), ws.end());
    double cum = x0_weight_;
    std::size_t x0_slots = 0;
    for (double w : ws) {
      if (!strictly_less(cum + w, epsilon_, slack_)) break;
      cum += w;
      ++x0_slots;
    }
    return ws.size() <= free_parts + x0_slots;
  }

  const EmpiricalTriple& t_;
  double epsilon_;
  double slack_;
  std::vector<std::size_t> order_;
  bool prune_;
  std::vector<std::size_t> separated_;
  std::vector<char> is_separated_;

  std::size_t budget_ = 0;
  std::vector<int> labels_;
  std::vector<std::vector<std::size_t>> parts_;
  std::vector<char> part_has_separated_;
  double x0_weight_ = 0.0;
};

}  // namespace detail

// Exact minimum k, by branch and bound over part budgets starting from the
// packing bound. A partition into singletons always exists, so the search
// terminates at k <= m.
inline EntropyEstimate epsilon_entropy_exact(const EmpiricalTriple& t,
                                             double epsilon,
                                             const EntropyOptions& opt = {}) {
  detail::require_positive_epsilon(epsilon);
  if (t.size() > opt.exact_limit)
    throw InstanceTooLarge("instance has " + std::to_string(t.size()) +
                           " points, exact limit is " +
                           std::to_string(opt.exact_limit) +
                           "; use the greedy/packing bound pair");

  detail::ExactSearch search(t, epsilon, opt);
  const std::size_t start =
      packing_bound(t, separated_set(t, epsilon, opt.slack), epsilon, opt.slack);

  EntropyEstimate e;
  e.epsilon = epsilon;
  e.exact = true;
  for (std::size_t k = start; k <= t.size(); ++k) {
    std::vector<int> labels;
    if (search.feasible(k, labels)) {
      e.k_lower = e.k_upper = k;
      e.partition = std::move(labels);
      return e;
    }
  }
  throw std::logic_error("epsilon_entropy_exact: no partition found");  // unreachable
}

struct PartitionCheck {
  bool ok = true;
  std::string message;
};

// Re-validates a partition witness against the strict inequalities: labels in
// range, residual mass < eps, every part of diameter < eps.
inline PartitionCheck check_partition(const EmpiricalTriple& t, double epsilon,
                                      const std::vector<int>& labels,
                                      std::size_t k, double slack = 1e-12) {
  PartitionCheck c;
  if (labels.size() != t.size()) {
    c.ok = false;
    c.message = "label count mismatch";
    return c;
  }
  double x0 = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) > k) {
      c.ok = false;
      c.message = "label out of range";
      return c;
    }
    if (labels[i] == 0) x0 += t.weight(i);
  }
  if (!strictly_less(x0, epsilon, slack)) {
    c.ok = false;
    c.message = "residual set too heavy";
    return c;
  }
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j)
      if (labels[i] != 0 && labels[i] == labels[j] &&
          !strictly_less(t.dist(i, j), epsilon, slack)) {
        c.ok = false;
        c.message = "part diameter too large";
        return c;
      }
  return c;
}

}  // namespace scalent
