#pragma once

// Block transfer matrices of rG x Z_n + V, the regularization frame at a
// reference energy, the regularized evolution X_k and its secular function.

#include "q1dlab/core.hpp"
#include "q1dlab/lattice.hpp"
#include "q1dlab/spectrum.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace q1dlab {

inline constexpr double kDefaultEdgeGuard = 1e-3;
inline constexpr double kDivergenceNorm = 1e12;

/// [[lambda I - G - diag(V), -I], [I, 0]].
inline CMatrix transfer_matrix(Complex lambda, const SymmetricOperator& g, const Vector& v_slice) {
  const int m = g.dim();
  if (v_slice.size() != m)
    throw DimensionError("potential slice has length " + std::to_string(v_slice.size()) +
                         ", expected " + std::to_string(m));
  CMatrix t = CMatrix::Zero(2 * m, 2 * m);
  t.topLeftCorner(m, m) = -g.entries().cast<Complex>();
  for (int j = 0; j < m; ++j) t(j, j) += lambda - v_slice[j];
  t.topRightCorner(m, m) = -CMatrix::Identity(m, m);
  t.bottomLeftCorner(m, m) = CMatrix::Identity(m, m);
  return t;
}

/// Change of basis that diagonalizes the unperturbed transfer matrix T_* at
/// lambda_star: with P = diag(O, O) Q, P^{-1} T_* P = diag(conj(Z), Z).
struct RegularizationFrame {
  double lambda_star = 0.0;
  Matrix G;       // the scaled base rG
  Matrix O;       // eigenvectors of rG (columns)
  Vector d;       // eigenvalues of rG, descending
  Vector theta;   // arccos((lambda_star - d_j) / 2), in (0, pi)
  CVector z;      // e^{i theta_j}
  Vector s_half;  // (2 sin theta_j)^{-1/2}: the diagonal of the block S_11
  CMatrix Q;
  CMatrix Q_inv;

  int m() const { return static_cast<int>(d.size()); }

  /// z_j^k, evaluated from the stored angle.
  Complex z_pow(int j, long long k) const { return unit_power(theta[j], k); }

  CMatrix conjugator() const {
    const int n = m();
    CMatrix block = CMatrix::Zero(2 * n, 2 * n);
    block.topLeftCorner(n, n) = O.cast<Complex>();
    block.bottomRightCorner(n, n) = O.cast<Complex>();
    return block * Q;
  }

  CMatrix conjugator_inverse() const {
    const int n = m();
    CMatrix block = CMatrix::Zero(2 * n, 2 * n);
    block.topLeftCorner(n, n) = O.transpose().cast<Complex>();
    block.bottomRightCorner(n, n) = O.transpose().cast<Complex>();
    return Q_inv * block;
  }

  /// min_j (2 - |lambda_star - d_j|).
  double band_margin() const {
    double margin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m(); ++j) margin = std::min(margin, 2.0 - std::abs(lambda_star - d[j]));
    return margin;
  }
};

inline RegularizationFrame build_frame(double lambda_star, const SymmetricOperator& rG,
                                       double edge_guard = kDefaultEdgeGuard) {
  RegularizationFrame f;
  f.lambda_star = lambda_star;
  f.G = rG.entries();
  const Diagonalization diag = diagonalize(rG);
  f.O = diag.O;
  f.d = diag.d;
  const int m = rG.dim();
  f.theta.resize(m);
  f.z.resize(m);
  f.s_half.resize(m);
  for (int j = 0; j < m; ++j) {
    const double gap = std::abs(lambda_star - f.d[j]);
    if (2.0 - gap <= edge_guard)
      throw FrameError("reference energy " + std::to_string(lambda_star) +
                           " is within the band-edge guard of channel j=" + std::to_string(j) +
                           " (|lambda_star - d_j| = " + std::to_string(gap) + ")",
                       j);
    f.theta[j] = std::acos((lambda_star - f.d[j]) / 2.0);
    f.z[j] = std::polar(1.0, f.theta[j]);
    f.s_half[j] = 1.0 / std::sqrt(2.0 * std::sin(f.theta[j]));
  }
  f.Q = CMatrix::Zero(2 * m, 2 * m);
  f.Q_inv = CMatrix::Zero(2 * m, 2 * m);
  for (int j = 0; j < m; ++j) {
    const double s = f.s_half[j];
    f.Q(j, j) = std::conj(f.z[j]) * s;
    f.Q(j, m + j) = f.z[j] * s;
    f.Q(m + j, j) = s;
    f.Q(m + j, m + j) = s;
    f.Q_inv(j, j) = kI * s;
    f.Q_inv(j, m + j) = -kI * s * f.z[j];
    f.Q_inv(m + j, j) = -kI * s;
    f.Q_inv(m + j, m + j) = kI * s * std::conj(f.z[j]);
  }
  return f;
}

/// X_k of the regularized evolution driven at lambda.
struct TransferState {
  int k = 0;
  CMatrix X;
  Complex lambda{};
};

namespace detail {

inline void check_slices(const RegularizationFrame& frame, std::span<const Vector> slices) {
  for (const auto& s : slices)
    if (s.size() != frame.m())
      throw DimensionError("potential slice has length " + std::to_string(s.size()) +
                           ", expected " + std::to_string(frame.m()));
}

/// O^T diag(v) O.
inline Matrix rotated_potential(const RegularizationFrame& frame, const Vector& v) {
  return frame.O.transpose() * v.asDiagonal() * frame.O;
}

inline void guard_norm(const CMatrix& x, int k) {
  const double norm = x.norm();
  if (!(norm <= kDivergenceNorm))
    throw DivergenceError("regularized evolution diverged at step " + std::to_string(k) +
                          " (||X|| = " + std::to_string(norm) + ")");
}

}  // namespace detail

/// One step factor of the evolution, by explicit conjugation:
/// diag(Z^k, Z^{-k}) P^{-1} T_k P diag(conj(Z), Z)^{k-1}, with k >= 1.
inline CMatrix conjugated_step_factor(const RegularizationFrame& frame, const Vector& v_slice,
                                      int k, Complex lambda) {
  const int m = frame.m();
  CMatrix t = CMatrix::Zero(2 * m, 2 * m);
  t.topLeftCorner(m, m) = -detail::rotated_potential(frame, v_slice).cast<Complex>();
  for (int j = 0; j < m; ++j) t(j, j) += lambda - frame.d[j];
  t.topRightCorner(m, m) = -CMatrix::Identity(m, m);
  t.bottomLeftCorner(m, m) = CMatrix::Identity(m, m);
  CMatrix f = frame.Q_inv * t * frame.Q;
  for (int j = 0; j < m; ++j) {
    const Complex left_top = frame.z_pow(j, k), left_bottom = std::conj(left_top);
    f.row(j) *= left_top;
    f.row(m + j) *= left_bottom;
    const Complex right_left = std::conj(frame.z_pow(j, k - 1)), right_right = frame.z_pow(j, k - 1);
    f.col(j) *= right_left;
    f.col(m + j) *= right_right;
  }
  return f;
}

/// R_k with I + R_k the k-th step factor, in closed form:
/// R_k = i S [[Z^k W Z^-k, Z^k W Z^k], [-Z^-k W Z^-k, -Z^-k W Z^k]] S,
/// W = (lambda - lambda_star) I - O^T diag(V_k) O.
inline CMatrix coefficient_expansion(const RegularizationFrame& frame, const Vector& v_slice,
                                     int k, Complex lambda_offset) {
  const int m = frame.m();
  if (v_slice.size() != m) throw DimensionError("potential slice has the wrong length");
  Matrix vo = detail::rotated_potential(frame, v_slice);
  CMatrix w = -vo.cast<Complex>();
  for (int j = 0; j < m; ++j) w(j, j) += lambda_offset;
  std::vector<Complex> zk(m);
  for (int j = 0; j < m; ++j) zk[j] = frame.z_pow(j, k);
  CMatrix r(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const Complex base = kI * frame.s_half[i] * frame.s_half[j] * w(i, j);
      r(i, j) = base * zk[i] * std::conj(zk[j]);
      r(i, m + j) = base * zk[i] * zk[j];
      r(m + i, j) = -base * std::conj(zk[i]) * std::conj(zk[j]);
      r(m + i, m + j) = -base * std::conj(zk[i]) * zk[j];
    }
  }
  return r;
}

/// Full path X_0 = I, ..., X_n by the conjugation formula.
inline std::vector<TransferState> evolve(const RegularizationFrame& frame,
                                         std::span<const Vector> slices, Complex lambda) {
  detail::check_slices(frame, slices);
  const int m = frame.m();
  std::vector<TransferState> path;
  path.reserve(slices.size() + 1);
  path.push_back({0, CMatrix::Identity(2 * m, 2 * m), lambda});
  for (std::size_t idx = 0; idx < slices.size(); ++idx) {
    const int k = static_cast<int>(idx) + 1;
    CMatrix x = conjugated_step_factor(frame, slices[idx], k, lambda) * path.back().X;
    detail::guard_norm(x, k);
    path.push_back({k, std::move(x), lambda});
  }
  return path;
}

/// X_n only, stepping X_k = X_{k-1} + R_k X_{k-1} with the closed-form R_k.
inline CMatrix evolve_terminal(const RegularizationFrame& frame, std::span<const Vector> slices,
                               Complex lambda) {
  detail::check_slices(frame, slices);
  const int m = frame.m();
  CMatrix x = CMatrix::Identity(2 * m, 2 * m);
  const Complex offset = lambda - frame.lambda_star;
  for (std::size_t idx = 0; idx < slices.size(); ++idx) {
    const int k = static_cast<int>(idx) + 1;
    x += coefficient_expansion(frame, slices[idx], k, offset) * x;
    if (k % 64 == 0 || idx + 1 == slices.size()) detail::guard_norm(x, k);
  }
  return x;
}

/// det Im(conj(Z)^{n+1} (X_11 - X_12)) with X = X_n(lambda), n = slices.size().
/// Proportional to det((T_n ... T_1)_{11}); its zeros are the box spectrum.
inline double secular_value(const RegularizationFrame& frame, const CMatrix& xn, long long n) {
  const int m = frame.m();
  Matrix im(m, m);
  for (int i = 0; i < m; ++i) {
    const Complex phase = std::conj(frame.z_pow(i, n + 1));
    for (int j = 0; j < m; ++j) im(i, j) = (phase * (xn(i, j) - xn(i, m + j))).imag();
  }
  return im.determinant();
}

inline double secular_function(const RegularizationFrame& frame, std::span<const Vector> slices,
                               double lambda) {
  return secular_value(frame, evolve_terminal(frame, slices, lambda),
                       static_cast<long long>(slices.size()));
}

/// Number of eigenvalues of rG x Z_n + diag(V) strictly below lambda, from the
/// inertia of the block LDL^T factorization of the block-tridiagonal M - lambda.
inline int count_eigenvalues_below(const Matrix& rG, std::span<const Vector> slices, double lambda) {
  const int m = static_cast<int>(rG.rows());
  int negatives = 0;
  Matrix prev_inv;
  for (std::size_t k = 0; k < slices.size(); ++k) {
    Matrix d = rG;
    for (int j = 0; j < m; ++j) d(j, j) += slices[k][j] - lambda;
    if (k > 0) d -= prev_inv;
    d = 0.5 * (d + d.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(d);
    const Vector& ev = es.eigenvalues();
    Vector inv_ev(m);
    for (int j = 0; j < m; ++j) {
      double e = ev[j];
      if (e < 0.0) ++negatives;
      if (std::abs(e) < 1e-300) e = e < 0.0 ? -1e-300 : 1e-300;
      inv_ev[j] = 1.0 / e;
    }
    prev_inv = es.eigenvectors() * inv_ev.asDiagonal() * es.eigenvectors().transpose();
  }
  return negatives;
}

inline int count_eigenvalues_in(const Matrix& rG, std::span<const Vector> slices, double lo, double hi) {
  return count_eigenvalues_below(rG, slices, hi) - count_eigenvalues_below(rG, slices, lo);
}

struct TransferSpectrumOptions {
  int grid_points = 0;           // 0: 8 points per mean spacing, i.e. 8 * m * n
  double tol = 1e-10;            // bisection width
  std::optional<int> expected_count;
  int max_refinements = 3;       // x4 grid refinement while the count mismatches
};

struct TransferSpectrumResult {
  SpectrumSample zeros{{}, Provenance::transfer};
  int grid_points = 0;
  int refinements = 0;
  bool resolution_warning = false;
};

namespace detail {

template <class F>
std::vector<double> bracketed_zeros(F&& f, double lo, double hi, int points, double tol) {
  std::vector<double> grid(points + 1), vals(points + 1);
  for (int i = 0; i <= points; ++i) {
    grid[i] = i == points ? hi : lo + (hi - lo) * static_cast<double>(i) / points;
    vals[i] = f(grid[i]);
  }
  std::vector<double> zeros;
  int last = -1;  // index of the last nonzero value
  for (int i = 0; i <= points; ++i) {
    if (vals[i] == 0.0) {
      zeros.push_back(grid[i]);
      continue;
    }
    if (last >= 0 && last == i - 1 && (vals[last] < 0.0) != (vals[i] < 0.0)) {
      double a = grid[last], b = grid[i];
      double fa = vals[last];
      while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double fm = f(mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      zeros.push_back(0.5 * (a + b));
    }
    last = i;
  }
  return zeros;
}

}  // namespace detail

/// Zeros of the secular function on [lo, hi]: sign-change bracketing on a
/// uniform grid, then bisection.
inline TransferSpectrumResult transfer_spectrum(const RegularizationFrame& frame,
                                                std::span<const Vector> slices, double lo, double hi,
                                                const TransferSpectrumOptions& opts = {}) {
  if (!(lo < hi)) throw GuardError("transfer_spectrum needs lo < hi");
  detail::check_slices(frame, slices);
  const long long dim = static_cast<long long>(frame.m()) * static_cast<long long>(slices.size());
  int points = opts.grid_points > 0 ? opts.grid_points : static_cast<int>(std::max(16LL, 8 * dim));
  auto f = [&](double lambda) { return secular_function(frame, slices, lambda); };
  TransferSpectrumResult res;
  for (int attempt = 0;; ++attempt) {
    auto zeros = detail::bracketed_zeros(f, lo, hi, points, opts.tol);
    res.grid_points = points;
    res.refinements = attempt;
    res.zeros = SpectrumSample(std::move(zeros), Provenance::transfer);
    if (!opts.expected_count || static_cast<int>(res.zeros.size()) == *opts.expected_count) {
      res.resolution_warning = false;
      break;
    }
    res.resolution_warning = true;
    if (attempt >= opts.max_refinements) break;
    points *= 4;
  }
  return res;
}

/// transfer_spectrum with the expected count taken from the inertia count.
inline TransferSpectrumResult counted_transfer_spectrum(const RegularizationFrame& frame,
                                                        std::span<const Vector> slices, double lo,
                                                        double hi, TransferSpectrumOptions opts = {}) {
  opts.expected_count = count_eigenvalues_in(frame.G, slices, lo, hi);
  return transfer_spectrum(frame, slices, lo, hi, opts);
}

}  // namespace q1dlab
