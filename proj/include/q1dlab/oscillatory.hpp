#pragma once

// Oscillatory sums of diagonal noise: the scalar sums B_{eta,n}, the matrix
// sums A_n, B_n in the regularization frame, their Monte Carlo covariance
// table, and the deterministic drift sum.

#include "q1dlab/chaos.hpp"
#include "q1dlab/core.hpp"
#include "q1dlab/lattice.hpp"
#include "q1dlab/parallel.hpp"
#include "q1dlab/random.hpp"
#include "q1dlab/stats.hpp"
#include "q1dlab/transfer.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace q1dlab {

/// (1/sqrt(n)) sum_{k=1}^n e^{i eta k} X_k with X_k drawn from `noise`.
inline Complex scalar_oscillatory_sum(double eta, int n, const NoiseSpec& noise) {
  if (n < 1) throw DimensionError("oscillatory sum needs n >= 1");
  Rng rng(noise.seed);
  CompensatedSum<Complex> acc;
  for (int k = 1; k <= n; ++k) acc.add(unit_power(eta, k) * noise.draw(rng));
  return acc.value() / std::sqrt(static_cast<double>(n));
}

struct OscillatorySums {
  CMatrix A;  // sum_k Z^k V_k^O Z^-k, Hermitian
  CMatrix B;  // sum_k Z^k V_k^O Z^k, complex symmetric
};

/// Evaluates A_n, B_n for many noise realizations of one frame. The phases
/// z_i^k conj(z_j)^k and z_i^k z_j^k are tabulated once when the table fits in
/// `table_limit` complex entries, and recomputed per step otherwise.
class OscillatoryKernel {
 public:
  OscillatoryKernel(const RegularizationFrame& frame, int n, std::size_t table_limit = 40'000'000)
      : m_(frame.m()), n_(n), O_(frame.O), theta_(frame.theta) {
    if (n < 1) throw DimensionError("oscillatory sums need n >= 1");
    for (int i = 0; i < m_; ++i)
      for (int j = i; j < m_; ++j) pairs_.emplace_back(i, j);
    weights_.resize(pairs_.size(), Vector(m_));
    for (std::size_t p = 0; p < pairs_.size(); ++p)
      for (int r = 0; r < m_; ++r) weights_[p][r] = O_(r, pairs_[p].first) * O_(r, pairs_[p].second);
    if (pairs_.size() * 2 * static_cast<std::size_t>(n) <= table_limit) {
      phase_a_.resize(pairs_.size() * n);
      phase_b_.resize(pairs_.size() * n);
      std::vector<Complex> zk(m_);
      for (int k = 1; k <= n; ++k) {
        for (int j = 0; j < m_; ++j) zk[j] = unit_power(theta_[j], k);
        for (std::size_t p = 0; p < pairs_.size(); ++p) {
          const auto [i, j] = pairs_[p];
          phase_a_[(k - 1) * pairs_.size() + p] = zk[i] * std::conj(zk[j]);
          phase_b_[(k - 1) * pairs_.size() + p] = zk[i] * zk[j];
        }
      }
    }
  }

  int m() const { return m_; }
  int n() const { return n_; }

  /// Slices are drawn k-major from noise.seed, exactly as draw_slices does.
  OscillatorySums sums(const NoiseSpec& noise) const {
    Rng rng(noise.seed);
    const std::size_t np = pairs_.size();
    std::vector<Complex> a(np), b(np), pa(np), pb(np);
    std::vector<Complex> zk(m_);
    Vector v(m_);
    for (int k = 1; k <= n_; ++k) {
      for (int j = 0; j < m_; ++j) v[j] = noise.draw(rng);
      const Complex* phase_a;
      const Complex* phase_b;
      if (!phase_a_.empty()) {
        phase_a = &phase_a_[(k - 1) * np];
        phase_b = &phase_b_[(k - 1) * np];
      } else {
        for (int j = 0; j < m_; ++j) zk[j] = unit_power(theta_[j], k);
        for (std::size_t p = 0; p < np; ++p) {
          pa[p] = zk[pairs_[p].first] * std::conj(zk[pairs_[p].second]);
          pb[p] = zk[pairs_[p].first] * zk[pairs_[p].second];
        }
        phase_a = pa.data();
        phase_b = pb.data();
      }
      for (std::size_t p = 0; p < np; ++p) {
        const double vo = weights_[p].dot(v);
        a[p] += phase_a[p] * vo;
        b[p] += phase_b[p] * vo;
      }
    }
    OscillatorySums out{CMatrix(m_, m_), CMatrix(m_, m_)};
    for (std::size_t p = 0; p < np; ++p) {
      const auto [i, j] = pairs_[p];
      if (i == j) {
        out.A(i, i) = Complex(a[p].real(), 0.0);
      } else {
        out.A(i, j) = a[p];
        out.A(j, i) = std::conj(a[p]);
      }
      out.B(i, j) = b[p];
      out.B(j, i) = b[p];
    }
    return out;
  }

 private:
  int m_;
  int n_;
  Matrix O_;
  Vector theta_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<Vector> weights_;  // O_ri O_rj over r, per canonical pair
  std::vector<Complex> phase_a_, phase_b_;
};

/// A_n and B_n, unnormalized.
inline OscillatorySums matrix_oscillatory_sums(const RegularizationFrame& frame, int n,
                                               const NoiseSpec& noise) {
  return OscillatoryKernel(frame, n, 0).sums(noise);
}

enum class CovarianceKind { AAbar, AA, BBbar, BB, ABbar };

inline std::string_view to_string(CovarianceKind k) {
  switch (k) {
    case CovarianceKind::AAbar: return "AAbar";
    case CovarianceKind::AA: return "AA";
    case CovarianceKind::BBbar: return "BBbar";
    case CovarianceKind::BB: return "BB";
    case CovarianceKind::ABbar: return "ABbar";
  }
  return "?";
}

/// One second moment E X_ij Y_i'j' of the normalized sums A_n/sqrt(n), B_n/sqrt(n).
struct CovarianceRow {
  CovarianceKind kind;
  int i, j, ip, jp;  // 0-based, canonical i <= j, i' <= j'
  ComplexEstimate empirical;
  Complex theoretical;
  double z = 0.0;                 // |empirical - theoretical| / SE
  bool must_vanish = false;       // theoretical value is 0
  std::optional<bool> pass;       // unset when the frame is resonant
};

struct CovarianceReport {
  std::vector<CovarianceRow> rows;
  int n_steps = 0;
  int n_trials = 0;
  double cha = 0.0;
  std::optional<std::string> warning;
  double z_threshold = 3.0;
  bool all_pass() const {
    for (const auto& r : rows)
      if (!r.pass || !*r.pass) return false;
    return true;
  }
};

/// Monte Carlo second moments of (A_n, B_n)/sqrt(n) over `trials` independent
/// noise streams noise.for_trial(t), against the Gram table:
///   E|A_ij|^2 = E|B_ij|^2 = E A_ii A_i'i' = E A_ii conj(A_i'i') = gram,
///   E A_ij A_ij (i<j) = E B_ij B_ij = E A_ij conj(B_ij) = 0.
inline CovarianceReport covariance_experiment(const RegularizationFrame& frame, int n, int trials,
                                              const NoiseSpec& noise, unsigned threads = 1,
                                              double z_threshold = 3.0) {
  if (trials < 100)
    throw StatisticalPowerError("covariance experiment needs at least 100 trials, got " +
                                std::to_string(trials));
  const int m = frame.m();
  CovarianceReport rep;
  rep.n_steps = n;
  rep.n_trials = trials;
  rep.z_threshold = z_threshold;
  rep.cha = chaoticity(AngleSet(std::vector<double>(frame.theta.begin(), frame.theta.end())));
  if (rep.cha < kResonanceThreshold)
    rep.warning = "critical angles are resonant (chaoticity " + std::to_string(rep.cha) +
                  "); oscillatory sums do not stabilize, no verdict issued";

  Diagonalization diag{frame.O, frame.d};
  const Matrix gram = overlap_gram(diag);

  struct Spec {
    CovarianceKind kind;
    int i, j, ip, jp;
    double target;
  };
  std::vector<Spec> specs;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) specs.push_back({CovarianceKind::AAbar, i, j, i, j, gram(i, j)});
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) specs.push_back({CovarianceKind::BBbar, i, j, i, j, gram(i, j)});
  for (int i = 0; i < m; ++i)
    for (int ip = i + 1; ip < m; ++ip) {
      specs.push_back({CovarianceKind::AA, i, i, ip, ip, gram(i, ip)});
      specs.push_back({CovarianceKind::AAbar, i, i, ip, ip, gram(i, ip)});
    }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) specs.push_back({CovarianceKind::AA, i, j, i, j, 0.0});
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) specs.push_back({CovarianceKind::BB, i, j, i, j, 0.0});
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) specs.push_back({CovarianceKind::ABbar, i, j, i, j, 0.0});

  const OscillatoryKernel kernel(frame, n);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<std::vector<Complex>> samples(specs.size(), std::vector<Complex>(trials));
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
    OscillatorySums s = kernel.sums(noise.for_trial(t));
    s.A *= inv_sqrt_n;
    s.B *= inv_sqrt_n;
    for (std::size_t q = 0; q < specs.size(); ++q) {
      const Spec& sp = specs[q];
      Complex v;
      switch (sp.kind) {
        case CovarianceKind::AAbar: v = s.A(sp.i, sp.j) * std::conj(s.A(sp.ip, sp.jp)); break;
        case CovarianceKind::AA: v = s.A(sp.i, sp.j) * s.A(sp.ip, sp.jp); break;
        case CovarianceKind::BBbar: v = s.B(sp.i, sp.j) * std::conj(s.B(sp.ip, sp.jp)); break;
        case CovarianceKind::BB: v = s.B(sp.i, sp.j) * s.B(sp.ip, sp.jp); break;
        case CovarianceKind::ABbar: v = s.A(sp.i, sp.j) * std::conj(s.B(sp.ip, sp.jp)); break;
      }
      samples[q][t] = v;
    }
  });

  for (std::size_t q = 0; q < specs.size(); ++q) {
    const Spec& sp = specs[q];
    CovarianceRow row{sp.kind, sp.i, sp.j, sp.ip, sp.jp, batched_estimate(samples[q]),
                      Complex(sp.target, 0.0), 0.0, false, std::nullopt};
    row.must_vanish = sp.target == 0.0;
    row.z = z_score(row.empirical, row.theoretical);
    if (!rep.warning) row.pass = row.z <= z_threshold;
    rep.rows.push_back(row);
  }
  return rep;
}

/// sum_{k=1}^n i(lambda - lambda_star) S [[I, Z^{2k}], [-Z^{-2k}, -I]] S: the
/// noise-free part of sum_k R_k. Geometric sums use the closed form.
inline CMatrix drift_sum(const RegularizationFrame& frame, long long n, Complex lambda_offset) {
  const int m = frame.m();
  CMatrix out = CMatrix::Zero(2 * m, 2 * m);
  for (int j = 0; j < m; ++j) {
    const double s2 = frame.s_half[j] * frame.s_half[j];
    const Complex c = kI * lambda_offset * s2;
    const Complex z2 = unit_power(2.0 * frame.theta[j], 1);
    Complex geo;
    if (std::abs(1.0 - z2) > 1e-8) {
      geo = z2 * (1.0 - unit_power(2.0 * frame.theta[j], n)) / (1.0 - z2);
    } else {
      geo = Complex(static_cast<double>(n), 0.0);
    }
    out(j, j) = c * static_cast<double>(n);
    out(m + j, m + j) = -c * static_cast<double>(n);
    out(j, m + j) = c * geo;
    out(m + j, j) = -c * std::conj(geo);
  }
  return out;
}

}  // namespace q1dlab
