#include "oracles.hpp"
#include "q1dlab/oscillatory.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace q1dlab;

namespace {

struct Moments {
  double mean, var, se_var;
};

Moments moments(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double s = 0, s2 = 0, s4 = 0;
  for (double v : x) s += v;
  const double mean = s / n;
  for (double v : x) {
    const double c = (v - mean) * (v - mean);
    s2 += c;
    s4 += c * c;
  }
  const double var = s2 / n;
  return {mean, var, std::sqrt((s4 / n - var * var) / n)};
}

/// sum_k Z^k O^T V_k O Z^{+-k} with explicit complex powers.
CMatrix direct_sum(const RegularizationFrame& f, const std::vector<Vector>& slices, bool b_sum) {
  const int m = f.m();
  CMatrix acc = CMatrix::Zero(m, m);
  for (std::size_t k = 1; k <= slices.size(); ++k) {
    const Matrix vo = f.O.transpose() * slices[k - 1].asDiagonal() * f.O;
    CMatrix zl = CMatrix::Zero(m, m), zr = CMatrix::Zero(m, m);
    for (int j = 0; j < m; ++j) {
      zl(j, j) = std::pow(f.z[j], static_cast<double>(k));
      zr(j, j) = b_sum ? zl(j, j) : std::conj(zl(j, j));
    }
    acc += zl * vo.cast<Complex>() * zr;
  }
  return acc;
}

RegularizationFrame chaotic_frame(int m) { return build_frame(0.3, scale(path_graph(m), 0.7)); }

}  // namespace

TEST(ScalarSum, ZeroFrequencyIsRealBrownian) {
  const int trials = 2000, n = 2000;
  std::vector<double> re(trials);
  for (int t = 0; t < trials; ++t) {
    const Complex b = scalar_oscillatory_sum(0.0, n, NoiseSpec{Distribution::gaussian, 1.0, mix_seed(1, t)});
    EXPECT_EQ(b.imag(), 0.0);
    re[t] = b.real();
  }
  const auto mo = moments(re);
  EXPECT_LT(std::abs(mo.var - 1.0), 5 * mo.se_var);
}

TEST(ScalarSum, QuarterTurnIsComplexBrownian) {
  const int trials = 2000, n = 2000;
  std::vector<double> re(trials), im(trials), abs2(trials);
  for (int t = 0; t < trials; ++t) {
    const Complex b = scalar_oscillatory_sum(kPi / 2, n, NoiseSpec{Distribution::rademacher, 1.0, mix_seed(2, t)});
    re[t] = b.real();
    im[t] = b.imag();
    abs2[t] = std::norm(b);
  }
  const auto mr = moments(re), mi = moments(im), ma = moments(abs2);
  EXPECT_LT(std::abs(mr.var - 0.5), 5 * mr.se_var);
  EXPECT_LT(std::abs(mi.var - 0.5), 5 * mi.se_var);
  EXPECT_LT(std::abs(ma.mean - 1.0), 5 * std::sqrt(ma.var / trials));
}

TEST(ScalarSum, ZeroNoiseAndGuards) {
  EXPECT_EQ(scalar_oscillatory_sum(1.0, 100, NoiseSpec{Distribution::gaussian, 0.0, 3}), Complex(0.0));
  EXPECT_THROW(scalar_oscillatory_sum(1.0, 0, NoiseSpec{}), DimensionError);
}

TEST(MatrixSums, ZeroNoise) {
  const auto s = matrix_oscillatory_sums(chaotic_frame(3), 50, NoiseSpec{Distribution::gaussian, 0.0, 1});
  EXPECT_EQ(s.A.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(s.B.cwiseAbs().maxCoeff(), 0.0);
}

TEST(MatrixSums, SingleStepPreservesModulus) {
  const auto f = chaotic_frame(3);
  const NoiseSpec noise{Distribution::gaussian, 1.0, 5};
  const auto s = matrix_oscillatory_sums(f, 1, noise);
  const Vector v = draw_slices(noise, 3, 1)[0];
  const Matrix vo = f.O.transpose() * v.asDiagonal() * f.O;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(std::abs(s.A(i, j)), std::abs(vo(i, j)), 1e-12);
      EXPECT_NEAR(std::abs(s.B(i, j)), std::abs(vo(i, j)), 1e-12);
    }
}

TEST(MatrixSums, MatchDirectConjugation) {
  for (int m = 1; m <= 4; ++m) {
    const auto f = chaotic_frame(m);
    const NoiseSpec noise{Distribution::uniform_centered, 1.0, 40u + m};
    const int n = 60;
    const auto s = matrix_oscillatory_sums(f, n, noise);
    const auto slices = draw_slices(noise, m, n);
    EXPECT_LT((s.A - direct_sum(f, slices, false)).norm(), 1e-10);
    EXPECT_LT((s.B - direct_sum(f, slices, true)).norm(), 1e-10);
  }
}

TEST(MatrixSums, HermitianAndSymmetric) {
  const auto f = chaotic_frame(4);
  const auto s = matrix_oscillatory_sums(f, 5000, NoiseSpec{Distribution::gaussian, 1.0, 6});
  EXPECT_LT((s.A - s.A.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((s.B - s.B.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(MatrixSums, LinearInAmplitude) {
  const auto f = chaotic_frame(3);
  const auto one = matrix_oscillatory_sums(f, 300, NoiseSpec{Distribution::gaussian, 1.0, 7});
  const auto two = matrix_oscillatory_sums(f, 300, NoiseSpec{Distribution::gaussian, 2.0, 7});
  EXPECT_EQ(two.A, (2.0 * one.A).eval());
  EXPECT_EQ(two.B, (2.0 * one.B).eval());
}

TEST(MatrixSums, PhaseTableDoesNotChangeValues) {
  const auto f = chaotic_frame(3);
  const NoiseSpec noise{Distribution::gaussian, 1.0, 8};
  const auto tabled = OscillatoryKernel(f, 4000).sums(noise);
  const auto fresh = OscillatoryKernel(f, 4000, 0).sums(noise);
  EXPECT_EQ(tabled.A, fresh.A);
  EXPECT_EQ(tabled.B, fresh.B);
}

TEST(CovarianceExperiment, TooFewTrials) {
  EXPECT_THROW(covariance_experiment(chaotic_frame(2), 100, 99, NoiseSpec{}), StatisticalPowerError);
}

TEST(CovarianceExperiment, ResonantFrameHasNoVerdict) {
  const auto f = build_frame(0.0, path_graph(1));  // theta = pi/2
  const auto rep = covariance_experiment(f, 200, 100, NoiseSpec{Distribution::gaussian, 1.0, 1});
  ASSERT_TRUE(rep.warning.has_value());
  for (const auto& r : rep.rows) EXPECT_FALSE(r.pass.has_value());
  EXPECT_FALSE(rep.all_pass());
}

TEST(CovarianceExperiment, RowTargetsFollowTheGram) {
  const auto f = chaotic_frame(3);
  const auto rep = covariance_experiment(f, 1000, 100, NoiseSpec{Distribution::gaussian, 1.0, 2});
  const Matrix gram = overlap_gram(Diagonalization{f.O, f.d});
  int vanish = 0;
  for (const auto& r : rep.rows) {
    if (r.must_vanish) {
      ++vanish;
      EXPECT_EQ(r.theoretical, Complex(0.0));
      continue;
    }
    // Diagonal-diagonal rows pair i with i'; the rest pair i with j.
    const int b = r.i == r.j && r.ip == r.jp ? r.ip : r.j;
    EXPECT_NEAR(r.theoretical.real(), gram(r.i, b), 1e-15);
  }
  EXPECT_EQ(vanish, 3 + 6 + 6);
}

TEST(CovarianceExperiment, ChaoticFrameMatchesTable) {
  const auto f = chaotic_frame(3);
  const auto rep = covariance_experiment(f, 20000, 600, NoiseSpec{Distribution::gaussian, 1.0, 11}, 1, 4.5);
  EXPECT_FALSE(rep.warning.has_value());
  for (const auto& r : rep.rows)
    EXPECT_TRUE(r.pass.value_or(false)) << to_string(r.kind) << " (" << r.i << r.j << "," << r.ip << r.jp
                                        << ") z=" << r.z;
}

TEST(CovarianceExperiment, GaussianAndRademacherAgree) {
  const auto f = chaotic_frame(2);
  const auto g = covariance_experiment(f, 10000, 600, NoiseSpec{Distribution::gaussian, 1.0, 12});
  const auto r = covariance_experiment(f, 10000, 600, NoiseSpec{Distribution::rademacher, 1.0, 13});
  ASSERT_EQ(g.rows.size(), r.rows.size());
  for (std::size_t i = 0; i < g.rows.size(); ++i)
    EXPECT_LT(z_score(g.rows[i].empirical, r.rows[i].empirical), 4.5) << i;
}

TEST(CovarianceExperiment, ThreadCountDoesNotChangeResults) {
  const auto f = chaotic_frame(2);
  const NoiseSpec noise{Distribution::gaussian, 1.0, 14};
  const auto a = covariance_experiment(f, 500, 120, noise, 1);
  const auto b = covariance_experiment(f, 500, 120, noise, 3);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].empirical.mean, b.rows[i].empirical.mean);
    EXPECT_EQ(a.rows[i].empirical.se_re, b.rows[i].empirical.se_re);
  }
}

TEST(DriftSum, ZeroOffset) {
  EXPECT_EQ(drift_sum(chaotic_frame(3), 1000, 0.0).cwiseAbs().maxCoeff(), 0.0);
}

TEST(DriftSum, FullPeriodsCancel) {
  const auto f = build_frame(1.0, path_graph(1));  // theta = pi/3
  for (long long n : {3LL, 30LL, 300000LL}) {
    const CMatrix d = drift_sum(f, n, 0.25);
    // theta is pi/3 only to double precision, so the residue grows like n * eps.
    const double tol = 1e-12 + 1e-16 * static_cast<double>(n);
    EXPECT_LT(std::abs(d(0, 1)), tol) << n;
    EXPECT_LT(std::abs(d(1, 0)), tol) << n;
  }
}

TEST(DriftSum, ClosedFormMatchesStepwiseSum) {
  const auto f = chaotic_frame(2);
  const int m = 2;
  const long long n = 100000;
  const Complex off(0.013, 0.0);
  const CMatrix d = drift_sum(f, n, off);
  for (int j = 0; j < m; ++j) {
    const double s2 = f.s_half[j] * f.s_half[j];
    EXPECT_NEAR(std::abs(d(j, j) - kI * off * s2 * static_cast<double>(n)), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(d(m + j, m + j) + kI * off * s2 * static_cast<double>(n)), 0.0, 1e-9);
    Complex geo(0.0);
    for (long long k = 1; k <= n; ++k) geo += unit_power(2.0 * f.theta[j], k);
    EXPECT_NEAR(std::abs(d(j, m + j) - kI * off * s2 * geo), 0.0, 1e-9);
    EXPECT_LE(std::abs(geo), 2.0 / std::abs(1.0 - f.z[j] * f.z[j]) + 1e-9);
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) {
        EXPECT_EQ(std::abs(d(i, j)), 0.0);
      }
}

TEST(DriftSum, AgreesWithSummedExpansion) {
  const auto f = chaotic_frame(3);
  const int n = 400;
  const double off = 0.02;
  CMatrix acc = CMatrix::Zero(6, 6);
  for (int k = 1; k <= n; ++k) acc += coefficient_expansion(f, Vector::Zero(3), k, off);
  EXPECT_LT((acc - drift_sum(f, n, off)).cwiseAbs().maxCoeff(), 1e-10);
}
