#pragma once

#include "q1dlab/core.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <type_traits>
#include <vector>

namespace q1dlab {

/// Neumaier compensated accumulator.
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    const T t = sum_ + x;
    if constexpr (std::is_same_v<T, Complex>) {
      comp_ += Complex(compensation(sum_.real(), x.real(), t.real()),
                       compensation(sum_.imag(), x.imag(), t.imag()));
    } else {
      comp_ += compensation(sum_, x, t);
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  static double compensation(double s, double x, double t) {
    return std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
  }
  T sum_{};
  T comp_{};
};

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
};

struct ComplexEstimate {
  Complex mean{};
  double se_re = 0.0;
  double se_im = 0.0;
  /// Standard error of the complex mean as a single scale, sqrt(se_re^2 + se_im^2).
  double se() const { return std::hypot(se_re, se_im); }
};

inline constexpr std::size_t kDefaultBatches = 20;

/// Mean with a batch-means standard error: values (in trial order) are split
/// into `batches` contiguous groups and the spread of group means gives the SE.
inline Estimate batched_estimate(std::span<const double> values,
                                 std::size_t batches = kDefaultBatches) {
  Estimate e;
  const std::size_t n = values.size();
  if (n == 0) return e;
  CompensatedSum<double> total;
  for (double v : values) total.add(v);
  e.mean = total.value() / static_cast<double>(n);
  batches = std::min(batches, n);
  if (batches < 2) return e;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t lo = b * n / batches, hi = (b + 1) * n / batches;
    CompensatedSum<double> s;
    for (std::size_t i = lo; i < hi; ++i) s.add(values[i]);
    means[b] = s.value() / static_cast<double>(hi - lo);
  }
  double var = 0.0;
  for (double m : means) var += (m - e.mean) * (m - e.mean);
  var /= static_cast<double>(batches - 1);
  e.se = std::sqrt(var / static_cast<double>(batches));
  return e;
}

inline ComplexEstimate batched_estimate(std::span<const Complex> values,
                                        std::size_t batches = kDefaultBatches) {
  std::vector<double> re(values.size()), im(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    re[i] = values[i].real();
    im[i] = values[i].imag();
  }
  const Estimate r = batched_estimate(re, batches);
  const Estimate m = batched_estimate(im, batches);
  return {Complex(r.mean, m.mean), r.se, m.se};
}

/// Plain i.i.d. estimate (sample variance / n).
inline Estimate iid_estimate(std::span<const double> values) {
  Estimate e;
  const std::size_t n = values.size();
  if (n == 0) return e;
  CompensatedSum<double> total;
  for (double v : values) total.add(v);
  e.mean = total.value() / static_cast<double>(n);
  if (n < 2) return e;
  CompensatedSum<double> ss;
  for (double v : values) ss.add((v - e.mean) * (v - e.mean));
  e.se = std::sqrt(ss.value() / static_cast<double>(n - 1) / static_cast<double>(n));
  return e;
}

/// |difference| in units of the joint standard error of two independent estimates.
inline double z_score(double a, double se_a, double b, double se_b) {
  const double se = std::hypot(se_a, se_b);
  if (se == 0.0) return a == b ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(a - b) / se;
}

inline double z_score(const ComplexEstimate& a, const ComplexEstimate& b) {
  const double se = std::hypot(a.se(), b.se());
  const double diff = std::abs(a.mean - b.mean);
  if (se == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / se;
}

inline double z_score(const ComplexEstimate& a, Complex target) {
  return z_score(a, ComplexEstimate{target, 0.0, 0.0});
}

}  // namespace q1dlab
