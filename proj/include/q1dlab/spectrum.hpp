#pragma once

#include "q1dlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>
#include <vector>

namespace q1dlab {

enum class Provenance { direct, transfer, goe, modified_goe, limit_matrix };

inline std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::direct: return "direct";
    case Provenance::transfer: return "transfer";
    case Provenance::goe: return "goe";
    case Provenance::modified_goe: return "modified-goe";
    case Provenance::limit_matrix: return "limit-matrix";
  }
  return "?";
}

/// Sorted (ascending) finite eigenvalues or secular-function zeros.
class SpectrumSample {
 public:
  SpectrumSample(std::vector<double> values, Provenance provenance)
      : values_(std::move(values)), provenance_(provenance) {
    for (double v : values_)
      if (!std::isfinite(v)) throw NumericError("spectrum sample contains a non-finite value");
    std::sort(values_.begin(), values_.end());
  }

  const std::vector<double>& values() const { return values_; }
  Provenance provenance() const { return provenance_; }
  std::size_t size() const { return values_.size(); }

  /// Values in the closed interval [lo, hi].
  SpectrumSample restricted(double lo, double hi) const {
    std::vector<double> out;
    for (double v : values_)
      if (v >= lo && v <= hi) out.push_back(v);
    return {std::move(out), provenance_};
  }

  SpectrumSample shifted(double delta) const {
    std::vector<double> out = values_;
    for (double& v : out) v += delta;
    return {std::move(out), provenance_};
  }

 private:
  std::vector<double> values_;
  Provenance provenance_;
};

}  // namespace q1dlab
