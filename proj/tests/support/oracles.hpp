#pragma once

// Independent reference computations shared by the test suites.

#include "q1dlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

using q1dlab::Complex;
using q1dlab::CMatrix;
using q1dlab::Matrix;
using q1dlab::Vector;

/// Sorted {a_i + 2cos(k pi/(n+1))}.
inline std::vector<double> kronecker_spectrum(const std::vector<double>& a, int n) {
  std::vector<double> out;
  for (double x : a)
    for (int k = 1; k <= n; ++k) out.push_back(x + 2.0 * std::cos(k * M_PI / (n + 1)));
  std::sort(out.begin(), out.end());
  return out;
}

/// 2cos(j pi/(m+1)), j = 1..m.
inline std::vector<double> path_spectrum(int m) {
  std::vector<double> out;
  for (int j = 1; j <= m; ++j) out.push_back(2.0 * std::cos(j * M_PI / (m + 1)));
  return out;
}

/// sqrt(2/(m+1)) sin(pi j k/(m+1)), row j (1-based) is the j-th eigenvector.
inline double path_eigenvector(int m, int j, int k) {
  return std::sqrt(2.0 / (m + 1)) * std::sin(M_PI * j * k / (m + 1));
}

/// sum_k O_ik^2 O_jk^2 with the sine eigenvectors (1-based i, j).
inline double path_gram(int m, int i, int j) {
  double s = 0.0;
  for (int k = 1; k <= m; ++k) {
    const double a = path_eigenvector(m, i, k), b = path_eigenvector(m, j, k);
    s += a * a * b * b;
  }
  return s;
}

/// The table for (m+1) gram(i, j) of the path graph (1-based).
inline double path_gram_table(int m, int i, int j) {
  if (i == j && 2 * i == m + 1) return 2.0;
  if (i == j || i + j == m + 1) return 1.5;
  return 1.0;
}

/// Every element of the three combination families, enumerated literally.
inline double chaoticity_literal(const std::vector<double>& x) {
  const int m = static_cast<int>(x.size());
  auto dist = [](double a) {
    double r = std::fmod(a, 2.0 * M_PI);
    if (r < 0) r += 2.0 * M_PI;
    return std::min(r, 2.0 * M_PI - r);
  };
  double best = M_PI;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d) {
          best = std::min(best, dist((x[a] + x[b]) + (x[c] + x[d])));
          best = std::min(best, dist((x[a] + x[b]) + (x[c] - x[d])));
          if (a != c && a != d && b != c && b != d) best = std::min(best, dist((x[a] + x[b]) - (x[c] + x[d])));
        }
  return best;
}

/// Ascending eigenvalues from Eigen's tridiagonal QR solver, independent of
/// the Jacobi code.
inline std::vector<double> eigen_reference(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().begin(), es.eigenvalues().end()};
}

}  // namespace oracle
