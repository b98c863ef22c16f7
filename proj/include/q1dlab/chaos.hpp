#pragma once

// Chaoticity of angle sets and the arithmetic parameter search for (r, n).

#include "q1dlab/core.hpp"
#include "q1dlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace q1dlab {

/// Chaoticity below this counts as resonant.
inline constexpr double kResonanceThreshold = 1e-9;

/// Angles on R/2piZ, stored reduced into [0, 2pi).
class AngleSet {
 public:
  AngleSet() = default;
  explicit AngleSet(std::vector<double> angles) : angles_(std::move(angles)) {
    for (double& a : angles_) a = reduce_angle(a);
  }
  const std::vector<double>& angles() const { return angles_; }
  std::size_t size() const { return angles_.size(); }
  bool empty() const { return angles_.empty(); }
  double operator[](std::size_t i) const { return angles_[i]; }

 private:
  std::vector<double> angles_;
};

// Every element of the combination set is evaluated with the same grouping,
// (x_a + x_b) + (x_c + x_d), (x_a + x_b) - (x_c + x_d), (x_a + x_b) + (x_c - x_e),
// so that the pruned and exhaustive enumerations see bit-identical values.

/// Exhaustive O(m^4) enumeration over all index tuples.
inline double chaoticity_bruteforce(const AngleSet& set) {
  if (set.empty()) throw DimensionError("chaoticity of an empty angle set");
  const auto& x = set.angles();
  const std::size_t m = x.size();
  double best = kPi;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t e = 0; e < m; ++e) {
          const double pair = x[a] + x[b];
          best = std::min(best, circle_distance(pair + (x[c] + x[e])));
          best = std::min(best, circle_distance(pair + (x[c] - x[e])));
          const bool disjoint = a != c && a != e && b != c && b != e;
          if (disjoint) best = std::min(best, circle_distance(pair - (x[c] + x[e])));
        }
  return best;
}

/// Same value as chaoticity_bruteforce, enumerating unordered pairs only.
inline double chaoticity(const AngleSet& set) {
  if (set.empty()) throw DimensionError("chaoticity of an empty angle set");
  const auto& x = set.angles();
  const std::size_t m = x.size();
  struct Pair {
    std::size_t a, b;
    double sum;
  };
  std::vector<Pair> pairs;
  pairs.reserve(m * (m + 1) / 2);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b) pairs.push_back({a, b, x[a] + x[b]});
  double best = kPi;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (std::size_t q = p; q < pairs.size(); ++q)
      best = std::min(best, circle_distance(pairs[p].sum + pairs[q].sum));
    for (const Pair& q : pairs) {
      const bool disjoint = pairs[p].a != q.a && pairs[p].a != q.b && pairs[p].b != q.a &&
                            pairs[p].b != q.b;
      if (disjoint) best = std::min(best, circle_distance(pairs[p].sum - q.sum));
    }
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t e = 0; e < m; ++e)
        best = std::min(best, circle_distance(pairs[p].sum + (x[c] - x[e])));
  }
  return best;
}

/// arccos((lambda_star - r d_j) / 2).
inline AngleSet critical_angles(double lambda_star, double r, const Vector& d) {
  std::vector<double> out(d.size());
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    const double arg = lambda_star - r * d[j];
    if (!(std::abs(arg) < 2.0))
      throw BandError("lambda_star - r d_j = " + std::to_string(arg) + " for j=" +
                      std::to_string(j) + " lies outside (-2, 2)");
    out[j] = std::acos(arg / 2.0);
  }
  return AngleSet(std::move(out));
}

/// True iff (2 - lambda_star)/(2 + lambda_star) differs from every ratio
/// d_j / d_j' (d_j' != 0) by more than tol.
inline bool strange_condition(double lambda_star, const Vector& d, double tol = 1e-9) {
  if (lambda_star == -2.0)
    throw ConditionError("(2 - lambda_star)/(2 + lambda_star) is undefined at lambda_star = -2");
  const double target = (2.0 - lambda_star) / (2.0 + lambda_star);
  for (Eigen::Index jp = 0; jp < d.size(); ++jp) {
    if (std::abs(d[jp]) <= 1e-12) continue;
    for (Eigen::Index j = 0; j < d.size(); ++j)
      if (std::abs(target - d[j] / d[jp]) <= tol) return false;
  }
  return true;
}

struct ParameterCandidate {
  double r = 0.0;
  int n = 0;
  double defect = 0.0;  // max_j dist((n+1) q_j, 0 mod 2pi)
  double cha = 0.0;
  bool strange_ok = false;
  double n_cha() const { return n * cha; }
};

/// Per-r outcome of the scan, kept whether or not r produced a candidate.
struct SearchDiagnostic {
  double r = 0.0;
  bool in_band = false;
  double cha = 0.0;
  int best_n = 0;
  double best_defect = 0.0;
  std::string status;  // accepted | low-chaoticity | defect-above-tolerance | out-of-band
};

struct SearchResult {
  std::vector<ParameterCandidate> candidates;  // sorted by defect
  std::vector<SearchDiagnostic> diagnostics;   // in r_grid order
  bool empty() const { return candidates.empty(); }
};

struct SearchOptions {
  int n_max = 1'000'000;
  double defect_tol = 0.05;
  double cha_min = 0.01;
};

/// max_j circle distance of (n+1) q_j to 0.
inline double angle_defect(const AngleSet& q, long long n) {
  double worst = 0.0;
  for (double a : q.angles()) worst = std::max(worst, circle_distance(std::fmod(static_cast<double>(n + 1) * a, kTwoPi)));
  return worst;
}

/// For each r with chaoticity >= cha_min, the n <= n_max minimizing the defect.
inline SearchResult search_parameters(double lambda_star, const SymmetricOperator& g,
                                      const std::vector<double>& r_grid,
                                      const SearchOptions& opts = {}) {
  const Vector d = diagonalize(g).d;
  if (!strange_condition(lambda_star, d))
    throw ConditionError("lambda_star = " + std::to_string(lambda_star) +
                         " violates (2 - lambda_star)/(2 + lambda_star) != d_j/d_j'");
  SearchResult res;
  for (double r : r_grid) {
    SearchDiagnostic diag;
    diag.r = r;
    AngleSet q;
    try {
      q = critical_angles(lambda_star, r, d);
    } catch (const BandError&) {
      diag.status = "out-of-band";
      res.diagnostics.push_back(diag);
      continue;
    }
    diag.in_band = true;
    diag.cha = chaoticity(q);
    if (diag.cha < opts.cha_min) {
      diag.status = "low-chaoticity";
      res.diagnostics.push_back(diag);
      continue;
    }
    // Later n replace the incumbent only on a strict improvement beyond
    // rounding, so exact resonances report their first occurrence.
    const std::size_t m = q.size();
    const std::vector<double>& step = q.angles();
    double best = std::numeric_limits<double>::infinity();
    int best_n = 0;
    for (int n = 1; n <= opts.n_max; ++n) {
      double worst = 0.0;
      for (std::size_t j = 0; j < m && worst < best; ++j)
        worst = std::max(worst, circle_distance(std::fmod(static_cast<double>(n + 1) * step[j], kTwoPi)));
      if (worst < best - 1e-12) {
        best = worst;
        best_n = n;
      }
    }
    diag.best_n = best_n;
    diag.best_defect = best;
    if (best <= opts.defect_tol) {
      diag.status = "accepted";
      res.candidates.push_back({r, best_n, best, diag.cha, true});
    } else {
      diag.status = "defect-above-tolerance";
    }
    res.diagnostics.push_back(diag);
  }
  std::stable_sort(res.candidates.begin(), res.candidates.end(),
                   [](const ParameterCandidate& a, const ParameterCandidate& b) {
                     return a.defect < b.defect;
                   });
  return res;
}

}  // namespace q1dlab
