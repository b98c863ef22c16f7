#pragma once

// GOE and the modified ensemble n^{-1/2}(K + bI), semicircle unfolding,
// nearest-neighbour spacings and Kolmogorov-Smirnov distances.

#include "q1dlab/core.hpp"
#include "q1dlab/parallel.hpp"
#include "q1dlab/random.hpp"
#include "q1dlab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace q1dlab {

/// sqrt(4 - x^2) / (2 pi) on [-2, 2].
inline double semicircle_density(double x) {
  if (std::abs(x) >= 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / kTwoPi;
}

inline double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * kPi) + std::asin(x / 2.0) / kPi;
}

namespace detail {

inline std::vector<double> symmetric_eigenvalues(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("symmetric eigensolver failed");
  return {es.eigenvalues().begin(), es.eigenvalues().end()};
}

}  // namespace detail

/// Symmetric Gaussian matrix with variance 2/n on the diagonal and 1/n off it.
inline Matrix goe_matrix(int n, Rng& rng) {
  if (n < 2) throw DimensionError("GOE needs n >= 2");
  Matrix h(n, n);
  const double off = 1.0 / std::sqrt(static_cast<double>(n));
  const double diag = std::sqrt(2.0 / n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = diag * rng.normal();
    for (int j = i + 1; j < n; ++j) h(i, j) = h(j, i) = off * rng.normal();
  }
  return h;
}

struct ModifiedGoeDraw {
  Matrix K;  // symmetric, variance 1 off the diagonal and 5/4 on it
  double b = 0.0;
  /// n^{-1/2} (K + b I).
  Matrix matrix() const {
    const double n = static_cast<double>(K.rows());
    return (K + b * Matrix::Identity(K.rows(), K.cols())) / std::sqrt(n);
  }
};

inline ModifiedGoeDraw draw_modified_goe(int n, Rng& rng) {
  if (n < 2) throw DimensionError("modified GOE needs n >= 2");
  ModifiedGoeDraw d{Matrix(n, n), 0.0};
  const double diag = std::sqrt(1.25);
  for (int i = 0; i < n; ++i) {
    d.K(i, i) = diag * rng.normal();
    for (int j = i + 1; j < n; ++j) d.K(i, j) = d.K(j, i) = rng.normal();
  }
  d.b = rng.normal();
  return d;
}

inline SpectrumSample sample_goe(int n, Rng& rng) {
  return {detail::symmetric_eigenvalues(goe_matrix(n, rng)), Provenance::goe};
}

inline SpectrumSample sample_modified_goe(int n, Rng& rng) {
  return {detail::symmetric_eigenvalues(draw_modified_goe(n, rng).matrix()), Provenance::modified_goe};
}

/// Unfolded nearest-neighbour gaps from one or more spectra.
struct SpacingSample {
  std::vector<double> spacings;
  double center = 0.0;
  double window_halfwidth = 0.0;

  double mean() const {
    if (spacings.empty()) return 0.0;
    double s = 0.0;
    for (double x : spacings) s += x;
    return s / static_cast<double>(spacings.size());
  }
  void append(const SpacingSample& other) {
    spacings.insert(spacings.end(), other.spacings.begin(), other.spacings.end());
  }
};

/// rho(center) * scale_n * (lambda_{i+1} - lambda_i) over consecutive
/// eigenvalues in [center - halfwidth, center + halfwidth].
inline SpacingSample unfold_spacings(const SpectrumSample& spec, double center,
                                     double window_halfwidth, int scale_n) {
  if (!(window_halfwidth > 0.0) || !(std::abs(center) < 2.0 - window_halfwidth))
    throw GuardError("unfolding window centre " + std::to_string(center) + " +- " +
                     std::to_string(window_halfwidth) + " leaves the bulk (-2, 2)");
  const auto inside = spec.restricted(center - window_halfwidth, center + window_halfwidth);
  if (inside.size() < 2)
    throw InsufficientDataError("fewer than two eigenvalues in the unfolding window");
  SpacingSample out{{}, center, window_halfwidth};
  const double unit = semicircle_density(center) * scale_n;
  const auto& v = inside.values();
  out.spacings.reserve(v.size() - 1);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) out.spacings.push_back(unit * (v[i + 1] - v[i]));
  return out;
}

/// Consecutive gaps of the sorted values.
inline std::vector<double> consecutive_gaps(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<double> gaps;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) gaps.push_back(values[i + 1] - values[i]);
  return gaps;
}

/// Divides by the sample mean (empirical unfolding).
inline void normalize_mean(std::vector<double>& xs) {
  if (xs.empty()) return;
  double s = 0.0;
  for (double x : xs) s += x;
  const double mean = s / static_cast<double>(xs.size());
  if (mean > 0.0)
    for (double& x : xs) x /= mean;
}

/// sup_x |F_1(x) - F_2(x)| for the empirical CDFs.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InsufficientDataError("KS distance of an empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < a.size() || j < b.size()) {
    const double x = j >= b.size() || (i < a.size() && a[i] <= b[j]) ? a[i] : b[j];
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

inline double ks_distance(const SpacingSample& a, const SpacingSample& b) {
  return ks_distance(a.spacings, b.spacings);
}

/// 1 - exp(-pi s^2 / 4).
inline double wigner_surmise_cdf(double s) {
  return s <= 0.0 ? 0.0 : 1.0 - std::exp(-kPi * s * s / 4.0);
}

/// One-sample KS distance against a continuous CDF.
template <class Cdf>
double ks_distance_to(std::vector<double> xs, Cdf&& cdf) {
  if (xs.empty()) throw InsufficientDataError("KS distance of an empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double best = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    best = std::max({best, std::abs(static_cast<double>(i + 1) / n - f),
                     std::abs(f - static_cast<double>(i) / n)});
  }
  return best;
}

inline double wigner_surmise_distance(const SpacingSample& sample) {
  if (sample.spacings.empty())
    throw InsufficientDataError("empty spacing sample (no eigenvalue pairs in the window)");
  return ks_distance_to(sample.spacings, wigner_surmise_cdf);
}

enum class Ensemble { goe, modified_goe };

struct EnsembleOptions {
  int n = 300;
  int samples = 200;
  double center = 0.0;
  double window_halfwidth = 0.2;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Pooled unfolded spacings of `samples` matrices; matrix i uses stream
/// mix_seed(seed, i).
inline SpacingSample spacing_ensemble(Ensemble kind, const EnsembleOptions& opts) {
  std::vector<SpacingSample> parts(opts.samples);
  parallel_for(static_cast<std::size_t>(opts.samples), opts.threads, [&](std::size_t i) {
    Rng rng(mix_seed(opts.seed, i));
    const SpectrumSample s = kind == Ensemble::goe ? sample_goe(opts.n, rng) : sample_modified_goe(opts.n, rng);
    parts[i] = unfold_spacings(s, opts.center, opts.window_halfwidth, opts.n);
  });
  SpacingSample out{{}, opts.center, opts.window_halfwidth};
  for (const auto& p : parts) out.append(p);
  return out;
}

}  // namespace q1dlab
