#pragma once

// Finite empirical semimetric triples: a weighted point set together with a
// symmetric nonnegative distance matrix. This is the desk-scale stand-in for
// a semimetric triple (X, mu, rho): `weights` plays mu, `distances` plays rho.

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scalent {

// Strict "a < b" with a symmetric slack. Values within `slack` of the
// threshold count as not-less, so mass sitting exactly at epsilon goes to the
// parts rather than the residual set.
inline bool strictly_less(double a, double b, double slack) {
  return a < b - slack;
}

class EmpiricalTriple {
public:
  EmpiricalTriple() = default;

  EmpiricalTriple(std::vector<double> weights, std::vector<double> distances)
      : weights_(std::move(weights)), distances_(std::move(distances)) {
    if (weights_.empty())
      throw std::invalid_argument("EmpiricalTriple: need at least one point");
    if (distances_.size() != weights_.size() * weights_.size())
      throw std::invalid_argument("EmpiricalTriple: distance matrix size mismatch");
  }

  static EmpiricalTriple uniform(std::size_t m, std::vector<double> distances) {
    return EmpiricalTriple(std::vector<double>(m, 1.0 / static_cast<double>(m)),
                           std::move(distances));
  }

  std::size_t size() const { return weights_.size(); }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  double dist(std::size_t i, std::size_t j) const {
    return distances_[i * size() + j];
  }
  const std::vector<double>& distances() const { return distances_; }

  EmpiricalTriple permuted(const std::vector<std::size_t>& perm) const {
    const std::size_t m = size();
    std::vector<double> w(m), d(m * m);
    for (std::size_t i = 0; i < m; ++i) {
      w[i] = weights_[perm[i]];
      for (std::size_t j = 0; j < m; ++j)
        d[i * m + j] = dist(perm[i], perm[j]);
    }
    return EmpiricalTriple(std::move(w), std::move(d));
  }

private:
  std::vector<double> weights_;
  std::vector<double> distances_;  // row-major m x m
};

enum class SemimetricDefect {
  None,
  EmptyPointSet,
  NegativeWeight,
  WeightSumOff,
  NegativeEntry,
  NonzeroDiagonal,
  Asymmetry,
  TriangleViolation,
};

struct ValidationReport {
  SemimetricDefect defect = SemimetricDefect::None;
  std::size_t i = 0, j = 0, k = 0;
  std::string message;

  bool ok() const { return defect == SemimetricDefect::None; }
};

struct ValidationOptions {
  double weight_sum_tol = 1e-12;
  double triangle_tol = 1e-9;
};

// Checks the semimetric axioms on finite data and reports the first violated
// one with indices. Zeros off the diagonal are allowed (semimetric, not
// metric).
inline ValidationReport validate_semimetric(const EmpiricalTriple& t,
                                            const ValidationOptions& opt = {}) {
  ValidationReport r;
  const std::size_t m = t.size();
  auto fail = [&](SemimetricDefect d, std::size_t i, std::size_t j,
                  std::size_t k, const std::string& msg) {
    r.defect = d;
    r.i = i;
    r.j = j;
    r.k = k;
    r.message = msg;
    return r;
  };

  if (m == 0) return fail(SemimetricDefect::EmptyPointSet, 0, 0, 0, "no points");

  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (t.weight(i) < 0.0) {
      std::ostringstream os;
      os << "negative weight at " << i;
      return fail(SemimetricDefect::NegativeWeight, i, 0, 0, os.str());
    }
    sum += t.weight(i);
  }
  if (std::abs(sum - 1.0) > opt.weight_sum_tol) {
    std::ostringstream os;
    os << "weights sum to " << sum << ", expected 1";
    return fail(SemimetricDefect::WeightSumOff, 0, 0, 0, os.str());
  }

  for (std::size_t i = 0; i < m; ++i) {
    if (t.dist(i, i) != 0.0) {
      std::ostringstream os;
      os << "nonzero diagonal at (" << i << "," << i << ")";
      return fail(SemimetricDefect::NonzeroDiagonal, i, i, 0, os.str());
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (t.dist(i, j) < 0.0) {
        std::ostringstream os;
        os << "negative entry at (" << i << "," << j << ")";
        return fail(SemimetricDefect::NegativeEntry, i, j, 0, os.str());
      }
      if (t.dist(i, j) != t.dist(j, i)) {
        std::ostringstream os;
        os << "asymmetry at (" << i << "," << j << ")";
        return fail(SemimetricDefect::Asymmetry, i, j, 0, os.str());
      }
    }

  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t j = 0; j < m; ++j)
        if (t.dist(i, k) > t.dist(i, j) + t.dist(j, k) + opt.triangle_tol) {
          std::ostringstream os;
          os << "triangle inequality violated at (" << i << "," << k << "," << j
             << ")";
          return fail(SemimetricDefect::TriangleViolation, i, k, j, os.str());
        }

  return r;
}

}  // namespace scalent
