#pragma once

// The matrix Brownian pair (A, B), Euler-Maruyama integration of
//   dY = i lambda S^2 J Y dt + i sigma S [[dA, dB], [-conj(dB), -conj(dA)]] S Y,
// the limit random matrix S Re(A(1) - B(1)) S, and the discrete-vs-SDE
// moment comparison.

#include "q1dlab/core.hpp"
#include "q1dlab/lattice.hpp"
#include "q1dlab/parallel.hpp"
#include "q1dlab/random.hpp"
#include "q1dlab/stats.hpp"
#include "q1dlab/transfer.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace q1dlab {

inline constexpr double kPsdClip = 1e-10;
inline constexpr int kDefaultSdeSteps = 2000;

struct BrownianPairIncrement {
  CMatrix dA;  // Hermitian
  CMatrix dB;  // complex symmetric
  double dt = 0.0;
};

/// Gaussian sampler for (A(dt), B(dt)) with covariance fixed by a Gram matrix:
///   Cov(A_ii, A_jj) = gram(i,j) dt,
///   Re A_ij, Im A_ij (i<j) and Re B_ij, Im B_ij (i<=j) independent with
///   variance gram(i,j) dt / 2,
/// and every other covariance zero. The real coordinates are ordered
/// [A_ii | Re A_ij, Im A_ij (i<j) | Re B_ij, Im B_ij (i<=j)].
class BrownianPairSampler {
 public:
  explicit BrownianPairSampler(const Matrix& gram) : m_(static_cast<int>(gram.rows())) {
    if (gram.rows() != gram.cols() || m_ < 1)
      throw DimensionError("Gram matrix must be square and nonempty");
    if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw CovarianceError("Gram matrix is not symmetric");
    const int dim = coordinate_count();
    covariance_ = Matrix::Zero(dim, dim);
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) covariance_(i, j) = gram(i, j);
    int c = m_;
    for (int i = 0; i < m_; ++i)
      for (int j = i + 1; j < m_; ++j) {
        covariance_(c, c) = covariance_(c + 1, c + 1) = 0.5 * gram(i, j);
        c += 2;
      }
    for (int i = 0; i < m_; ++i)
      for (int j = i; j < m_; ++j) {
        covariance_(c, c) = covariance_(c + 1, c + 1) = 0.5 * gram(i, j);
        c += 2;
      }
    Eigen::SelfAdjointEigenSolver<Matrix> es(covariance_);
    Vector ev = es.eigenvalues();
    for (int k = 0; k < dim; ++k) {
      if (ev[k] < -kPsdClip)
        throw CovarianceError("Brownian-pair covariance is not positive semidefinite (eigenvalue " +
                              std::to_string(ev[k]) + ")");
      ev[k] = std::max(ev[k], 0.0);
    }
    factor_ = es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
  }

  int m() const { return m_; }
  int coordinate_count() const { return m_ + m_ * (m_ - 1) + m_ * (m_ + 1); }
  const Matrix& covariance() const { return covariance_; }

  BrownianPairIncrement sample(double dt, Rng& rng) const {
    const int dim = coordinate_count();
    Vector g(dim);
    for (int k = 0; k < dim; ++k) g[k] = rng.normal();
    const Vector x = std::sqrt(dt) * (factor_ * g);
    BrownianPairIncrement inc{CMatrix(m_, m_), CMatrix(m_, m_), dt};
    for (int i = 0; i < m_; ++i) inc.dA(i, i) = Complex(x[i], 0.0);
    int c = m_;
    for (int i = 0; i < m_; ++i)
      for (int j = i + 1; j < m_; ++j) {
        inc.dA(i, j) = Complex(x[c], x[c + 1]);
        inc.dA(j, i) = std::conj(inc.dA(i, j));
        c += 2;
      }
    for (int i = 0; i < m_; ++i)
      for (int j = i; j < m_; ++j) {
        inc.dB(i, j) = inc.dB(j, i) = Complex(x[c], x[c + 1]);
        c += 2;
      }
    return inc;
  }

 private:
  int m_;
  Matrix covariance_;
  Matrix factor_;  // covariance = factor factor^T
};

inline BrownianPairIncrement sample_brownian_increment(const Matrix& gram, double dt, Rng& rng) {
  return BrownianPairSampler(gram).sample(dt, rng);
}

/// (A(dt), B(dt)) = sqrt(dt/(m+1)) (A' + zeta I, B') with A' Hermitian
/// (standard complex off-diagonal, N(0, 1/2) diagonal), zeta ~ N(0, 1), and B'
/// symmetric (standard complex off-diagonal, complex variance 3/2 diagonal).
inline BrownianPairIncrement gue_representation_increment(int m, double dt, Rng& rng) {
  if (m < 1) throw DimensionError("GUE representation needs m >= 1");
  const double scale = std::sqrt(dt / (m + 1));
  const double half = std::sqrt(0.5);
  BrownianPairIncrement inc{CMatrix(m, m), CMatrix(m, m), dt};
  for (int i = 0; i < m; ++i) {
    inc.dA(i, i) = Complex(half * rng.normal(), 0.0);
    for (int j = i + 1; j < m; ++j) {
      inc.dA(i, j) = Complex(half * rng.normal(), half * rng.normal());
      inc.dA(j, i) = std::conj(inc.dA(i, j));
    }
  }
  const double zeta = rng.normal();
  for (int i = 0; i < m; ++i) inc.dA(i, i) += zeta;
  const double diag_b = std::sqrt(0.75);
  for (int i = 0; i < m; ++i) {
    inc.dB(i, i) = Complex(diag_b * rng.normal(), diag_b * rng.normal());
    for (int j = i + 1; j < m; ++j)
      inc.dB(i, j) = inc.dB(j, i) = Complex(half * rng.normal(), half * rng.normal());
  }
  inc.dA *= scale;
  inc.dB *= scale;
  return inc;
}

/// [[dA, dB], [-conj(dB), -conj(dA)]].
inline CMatrix noise_block(const BrownianPairIncrement& inc) {
  const int m = static_cast<int>(inc.dA.rows());
  CMatrix n(2 * m, 2 * m);
  n.topLeftCorner(m, m) = inc.dA;
  n.topRightCorner(m, m) = inc.dB;
  n.bottomLeftCorner(m, m) = -inc.dB.conjugate();
  n.bottomRightCorner(m, m) = -inc.dA.conjugate();
  return n;
}

struct SdePath {
  std::vector<double> times;
  std::vector<CMatrix> Y;
  Complex lambda{};
  double sigma = 0.0;
};

/// Noise blocks for every Euler step on [0, 1], so one realization can be
/// replayed at many lambda.
struct NoisePath {
  std::vector<CMatrix> blocks;
  double dt = 0.0;
};

inline NoisePath draw_noise_path(const BrownianPairSampler& sampler, int steps, Rng& rng) {
  if (steps < 1) throw DimensionError("SDE integration needs steps >= 1");
  NoisePath p;
  p.dt = 1.0 / steps;
  p.blocks.reserve(steps);
  for (int k = 0; k < steps; ++k) p.blocks.push_back(noise_block(sampler.sample(p.dt, rng)));
  return p;
}

namespace detail {

struct EulerCoefficients {
  CVector drift;  // i lambda dt S^2 J, diagonal
  Vector s;       // diagonal of the 2m x 2m S
};

inline EulerCoefficients euler_coefficients(const Vector& s_half, Complex lambda, double dt) {
  const int m = static_cast<int>(s_half.size());
  EulerCoefficients c{CVector(2 * m), Vector(2 * m)};
  for (int j = 0; j < m; ++j) {
    const double s2 = s_half[j] * s_half[j];
    c.drift[j] = kI * lambda * dt * s2;
    c.drift[m + j] = -kI * lambda * dt * s2;
    c.s[j] = c.s[m + j] = s_half[j];
  }
  return c;
}

/// Y + drift Y + i sigma S N S Y.
inline void euler_step(CMatrix& y, const EulerCoefficients& c, const CMatrix& block, double sigma) {
  CMatrix sns = c.s.asDiagonal() * block * c.s.asDiagonal();
  CMatrix next = y + c.drift.asDiagonal() * y;
  if (sigma != 0.0) next.noalias() += (kI * sigma) * (sns * y);
  y = std::move(next);
}

inline void guard_sde(const CMatrix& y, int k) {
  const double norm = y.norm();
  if (!(norm <= kDivergenceNorm))
    throw DivergenceError("SDE integration diverged at step " + std::to_string(k));
}

}  // namespace detail

/// Y_1 for a stored noise realization.
inline CMatrix integrate_terminal(const Vector& s_half, const NoisePath& noise, Complex lambda,
                                  double sigma) {
  const int m = static_cast<int>(s_half.size());
  const auto coeff = detail::euler_coefficients(s_half, lambda, noise.dt);
  CMatrix y = CMatrix::Identity(2 * m, 2 * m);
  for (std::size_t k = 0; k < noise.blocks.size(); ++k) {
    detail::euler_step(y, coeff, noise.blocks[k], sigma);
    if ((k + 1) % 64 == 0) detail::guard_sde(y, static_cast<int>(k + 1));
  }
  detail::guard_sde(y, static_cast<int>(noise.blocks.size()));
  return y;
}

/// Y_1 drawing the increments on the fly.
inline CMatrix integrate_terminal(const Vector& s_half, const BrownianPairSampler& sampler,
                                  Complex lambda, double sigma, int steps, Rng& rng) {
  if (steps < 1) throw DimensionError("SDE integration needs steps >= 1");
  const int m = static_cast<int>(s_half.size());
  if (sampler.m() != m) throw DimensionError("S and Gram dimensions differ");
  const double dt = 1.0 / steps;
  const auto coeff = detail::euler_coefficients(s_half, lambda, dt);
  CMatrix y = CMatrix::Identity(2 * m, 2 * m);
  for (int k = 1; k <= steps; ++k) {
    const CMatrix block = sigma != 0.0 ? noise_block(sampler.sample(dt, rng)) : CMatrix::Zero(2 * m, 2 * m);
    detail::euler_step(y, coeff, block, sigma);
    if (k % 64 == 0 || k == steps) detail::guard_sde(y, k);
  }
  return y;
}

/// Full Euler-Maruyama path on the uniform grid t_k = k / steps.
inline SdePath integrate(const Vector& s_half, const Matrix& gram, Complex lambda, double sigma,
                         int steps, Rng& rng) {
  if (steps < 1) throw DimensionError("SDE integration needs steps >= 1");
  const int m = static_cast<int>(s_half.size());
  if (gram.rows() != m) throw DimensionError("S and Gram dimensions differ");
  const BrownianPairSampler sampler(gram);
  const double dt = 1.0 / steps;
  const auto coeff = detail::euler_coefficients(s_half, lambda, dt);
  SdePath path;
  path.lambda = lambda;
  path.sigma = sigma;
  path.times.reserve(steps + 1);
  path.Y.reserve(steps + 1);
  path.times.push_back(0.0);
  path.Y.push_back(CMatrix::Identity(2 * m, 2 * m));
  CMatrix y = path.Y.back();
  for (int k = 1; k <= steps; ++k) {
    detail::euler_step(y, coeff, noise_block(sampler.sample(dt, rng)), sigma);
    detail::guard_sde(y, k);
    path.times.push_back(static_cast<double>(k) * dt);
    path.Y.push_back(y);
  }
  return path;
}

/// exp(i lambda t S^2 J), the noise-free solution.
inline CMatrix deterministic_solution(const Vector& s_half, Complex lambda, double t) {
  const int m = static_cast<int>(s_half.size());
  CMatrix out = CMatrix::Zero(2 * m, 2 * m);
  for (int j = 0; j < m; ++j) {
    const double s2 = s_half[j] * s_half[j];
    out(j, j) = std::exp(kI * lambda * t * s2);
    out(m + j, m + j) = std::exp(-kI * lambda * t * s2);
  }
  return out;
}

enum class LimitPart { real, imag };

/// S Re(A(1) - B(1)) S (or the imaginary part, for comparison).
inline Matrix limit_matrix(const Vector& s_half, const BrownianPairSampler& sampler, Rng& rng,
                           LimitPart part = LimitPart::real) {
  const BrownianPairIncrement inc = sampler.sample(1.0, rng);
  const CMatrix diff = inc.dA - inc.dB;
  Matrix core = part == LimitPart::real ? Matrix(diff.real()) : Matrix(diff.imag());
  Matrix out = s_half.asDiagonal() * core * s_half.asDiagonal();
  const Eigen::Index m = out.rows();
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j) out(j, i) = out(i, j);
  return out;
}

inline Matrix limit_matrix(const Vector& s_half, const Matrix& gram, Rng& rng,
                           LimitPart part = LimitPart::real) {
  return limit_matrix(s_half, BrownianPairSampler(gram), rng, part);
}

/// One compared observable: E f(X_n) on the lattice against E f(Y_1).
struct MomentRow {
  std::string label;
  ComplexEstimate discrete;
  ComplexEstimate continuum;
  double z = 0.0;
  bool pass = false;
};

struct MomentReport {
  std::vector<MomentRow> rows;
  int n = 0;
  int trials = 0;
  int sde_steps = 0;
  double z_threshold = 3.0;
  bool all_pass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }
};

struct DiscreteVsSdeOptions {
  int sde_steps = kDefaultSdeSteps;
  unsigned threads = 1;
  double z_threshold = 3.0;
  Distribution distribution = Distribution::gaussian;
};

/// Entries compared by discrete_vs_sde_experiment: X_11 and X_12 of the block
/// layout, plus the first off-diagonal entry of the top-left block when m > 1.
inline std::vector<std::pair<int, int>> compared_entries(int m) {
  std::vector<std::pair<int, int>> e{{0, 0}, {0, m}};
  if (m > 1) e.emplace_back(0, 1);
  return e;
}

/// Moments of X_n(lambda_star + lambda / n) for the box with potential
/// (sigma / sqrt(n)) V against moments of Y_1(lambda). Trial t of the lattice
/// uses stream mix_seed(seed, t); path t of the SDE uses mix_seed(seed ^ 1, t).
inline MomentReport discrete_vs_sde_experiment(const RegularizationFrame& frame, int n,
                                               Complex lambda, double sigma, int trials,
                                               std::uint64_t seed,
                                               const DiscreteVsSdeOptions& opts = {}) {
  if (trials < 2) throw StatisticalPowerError("discrete-vs-SDE comparison needs trials >= 2");
  const int m = frame.m();
  const auto entries = compared_entries(m);
  const std::size_t ne = entries.size();
  std::vector<std::vector<Complex>> xs(2 * ne, std::vector<Complex>(trials));
  std::vector<std::vector<Complex>> ys(2 * ne, std::vector<Complex>(trials));
  const Complex lam = frame.lambda_star + lambda / static_cast<double>(n);
  const double prefactor = sigma / std::sqrt(static_cast<double>(n));
  parallel_for(static_cast<std::size_t>(trials), opts.threads, [&](std::size_t t) {
    NoiseSpec noise{opts.distribution, 1.0, mix_seed(seed, t)};
    const auto slices = box_slices(noise, m, n, prefactor);
    const CMatrix x = evolve_terminal(frame, slices, lam);
    for (std::size_t e = 0; e < ne; ++e) {
      const Complex v = x(entries[e].first, entries[e].second);
      xs[2 * e][t] = v;
      xs[2 * e + 1][t] = std::norm(v);
    }
  });
  const Matrix gram = overlap_gram(Diagonalization{frame.O, frame.d});
  const BrownianPairSampler sampler(gram);
  parallel_for(static_cast<std::size_t>(trials), opts.threads, [&](std::size_t t) {
    Rng rng(mix_seed(seed ^ 1ULL, t));
    const CMatrix y = integrate_terminal(frame.s_half, sampler, lambda, sigma, opts.sde_steps, rng);
    for (std::size_t e = 0; e < ne; ++e) {
      const Complex v = y(entries[e].first, entries[e].second);
      ys[2 * e][t] = v;
      ys[2 * e + 1][t] = std::norm(v);
    }
  });
  MomentReport rep;
  rep.n = n;
  rep.trials = trials;
  rep.sde_steps = opts.sde_steps;
  rep.z_threshold = opts.z_threshold;
  for (std::size_t e = 0; e < ne; ++e) {
    const std::string idx = std::to_string(entries[e].first + 1) + "," + std::to_string(entries[e].second + 1);
    for (int moment = 0; moment < 2; ++moment) {
      MomentRow row;
      row.label = (moment == 0 ? "E X[" : "E |X|^2[") + idx + "]";
      row.discrete = batched_estimate(xs[2 * e + moment]);
      row.continuum = batched_estimate(ys[2 * e + moment]);
      row.z = z_score(row.discrete, row.continuum);
      row.pass = row.z <= opts.z_threshold;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace q1dlab
