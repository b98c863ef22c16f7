#include "q1dlab/rmt.hpp"
#include "q1dlab/stats.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace q1dlab;

namespace {

/// Kolmogorov distance of the eigenvalue empirical CDF to the semicircle.
double semicircle_distance(const SpectrumSample& s) { return ks_distance_to(s.values(), semicircle_cdf); }

}  // namespace

TEST(Semicircle, PointValues) {
  EXPECT_NEAR(semicircle_density(0.0), 1.0 / kPi, 1e-15);
  EXPECT_EQ(semicircle_density(2.0), 0.0);
  EXPECT_EQ(semicircle_density(-2.0), 0.0);
  EXPECT_EQ(semicircle_density(3.0), 0.0);
}

TEST(Semicircle, IntegratesToOne) {
  // x = 2 sin t removes the square-root endpoints; composite Simpson on t.
  const int n = 2000;
  const double a = -kPi / 2, h = kPi / n;
  double s = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double t = a + k * h;
    const double f = semicircle_density(2.0 * std::sin(t)) * 2.0 * std::cos(t);
    s += f * (k == 0 || k == n ? 1.0 : (k % 2 ? 4.0 : 2.0));
  }
  EXPECT_NEAR(s * h / 3.0, 1.0, 1e-10);
}

TEST(Semicircle, CdfIsTheAntiderivative) {
  EXPECT_NEAR(semicircle_cdf(0.0), 0.5, 1e-15);
  EXPECT_EQ(semicircle_cdf(-2.5), 0.0);
  EXPECT_EQ(semicircle_cdf(2.5), 1.0);
  for (double x : {-1.5, -0.3, 0.0, 0.9, 1.7}) {
    const double h = 1e-5;
    EXPECT_NEAR((semicircle_cdf(x + h) - semicircle_cdf(x - h)) / (2 * h), semicircle_density(x), 1e-8);
  }
}

TEST(Goe, SemicircleLaw) {
  double total = 0.0;
  std::vector<double> top;
  for (int i = 0; i < 50; ++i) {
    Rng rng(mix_seed(1, i));
    const auto s = sample_goe(400, rng);
    total += semicircle_distance(s);
    top.push_back(s.values().back());
  }
  EXPECT_LT(total / 50, 0.05);
  std::nth_element(top.begin(), top.begin() + 25, top.end());
  EXPECT_NEAR(top[25], 2.0, 0.2);
}

TEST(Goe, EntryVariances) {
  Rng rng(2);
  double d = 0, o = 0;
  const int reps = 2000, n = 10;
  for (int r = 0; r < reps; ++r) {
    const Matrix h = goe_matrix(n, rng);
    EXPECT_EQ(h, h.transpose().eval());
    d += h(0, 0) * h(0, 0);
    o += h(0, 1) * h(0, 1);
  }
  EXPECT_NEAR(d / reps * n, 2.0, 0.2);
  EXPECT_NEAR(o / reps * n, 1.0, 0.1);
}

TEST(Goe, TwoByTwoHasSimpleSpectrum) {
  Rng rng(3);
  double gap_sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto v = sample_goe(2, rng).values();
    ASSERT_GT(v[1] - v[0], 1e-12);
    gap_sum += v[1] - v[0];
  }
  EXPECT_GT(gap_sum, 0.0);
  EXPECT_THROW(sample_goe(1, rng), DimensionError);
}

TEST(ModifiedGoe, ShiftIsRigid) {
  Rng rng(4);
  const auto d = draw_modified_goe(50, rng);
  const auto shifted = detail::symmetric_eigenvalues(d.matrix());
  const auto plain = detail::symmetric_eigenvalues(d.K / std::sqrt(50.0));
  const auto a = consecutive_gaps(shifted), b = consecutive_gaps(plain);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
  EXPECT_NEAR(shifted[0] - plain[0], d.b / std::sqrt(50.0), 1e-12);
}

TEST(ModifiedGoe, DiagonalVarianceAndSharedShift) {
  Rng rng(5);
  const int count = 100000;
  std::vector<double> v0(count), cross(count);
  for (int i = 0; i < count; ++i) {
    const auto d = draw_modified_goe(2, rng);
    const double x = d.K(0, 0) + d.b, y = d.K(1, 1) + d.b;
    v0[i] = x * x;
    cross[i] = x * y;
  }
  const auto e0 = iid_estimate(v0), ec = iid_estimate(cross);
  EXPECT_LT(std::abs(e0.mean - 2.25), 3 * e0.se);
  EXPECT_LT(std::abs(ec.mean - 1.0), 3 * ec.se);
}

TEST(ModifiedGoe, SemicircleLaw) {
  double total = 0.0;
  for (int i = 0; i < 50; ++i) {
    Rng rng(mix_seed(6, i));
    total += semicircle_distance(sample_modified_goe(400, rng));
  }
  EXPECT_LT(total / 50, 0.07);
}

TEST(Unfold, EquallySpacedSpectrum) {
  const int n = 100;
  const double gap = 1.0 / (n * semicircle_density(0.0));
  std::vector<double> v;
  for (int k = -20; k <= 20; ++k) v.push_back(k * gap);
  const auto s = unfold_spacings(SpectrumSample(v, Provenance::direct), 0.0, 0.2, n);
  ASSERT_FALSE(s.spacings.empty());
  for (double x : s.spacings) EXPECT_NEAR(x, 1.0, 1e-12);
}

TEST(Unfold, GoeMeanSpacingNearOne) {
  for (int i = 0; i < 50; ++i) {
    Rng rng(mix_seed(7, i));
    const auto s = unfold_spacings(sample_goe(400, rng), 0.0, 0.2, 400);
    EXPECT_GT(s.mean(), 0.8);
    EXPECT_LT(s.mean(), 1.2);
  }
  EnsembleOptions opts;
  opts.n = 400;
  opts.samples = 50;
  opts.seed = 7;
  const double mean = spacing_ensemble(Ensemble::goe, opts).mean();
  EXPECT_GT(mean, 0.9);
  EXPECT_LT(mean, 1.1);
}

TEST(Unfold, ShiftInvariance) {
  // Shifting from centre -0.3 to +0.3 keeps rho(centre) by symmetry.
  Rng rng(8);
  const auto s = sample_goe(300, rng);
  std::vector<double> moved;
  for (double v : s.values()) moved.push_back(v + 0.6);
  const auto a = unfold_spacings(s, -0.3, 0.2, 300);
  const auto b = unfold_spacings(SpectrumSample(moved, Provenance::goe), 0.3, 0.2, 300);
  ASSERT_EQ(a.spacings.size(), b.spacings.size());
  for (std::size_t i = 0; i < a.spacings.size(); ++i) EXPECT_NEAR(a.spacings[i], b.spacings[i], 1e-12);
}

TEST(Unfold, Guards) {
  const SpectrumSample s({-0.1, 0.0, 0.1}, Provenance::direct);
  EXPECT_THROW(unfold_spacings(s, 1.9, 0.2, 10), GuardError);
  EXPECT_THROW(unfold_spacings(s, 0.0, 0.0, 10), GuardError);
  EXPECT_THROW(unfold_spacings(s, 1.0, 0.2, 10), InsufficientDataError);
  EXPECT_NO_THROW(unfold_spacings(s, 0.0, 0.2, 10));
}

TEST(KsDistance, WorkedValues) {
  EXPECT_EQ(ks_distance({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}), 0.0);
  EXPECT_EQ(ks_distance({0.0, 0.5}, {2.0, 3.0}), 1.0);
  EXPECT_DOUBLE_EQ(ks_distance({1.0}, {1.0, 2.0}), 0.5);
  EXPECT_THROW(ks_distance({}, {1.0}), InsufficientDataError);
}

TEST(KsDistance, Pseudometric) {
  std::mt19937_64 gen(9);
  std::exponential_distribution<double> e;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> a(1 + rep % 13), b(2 + rep % 7), c(3 + rep % 5);
    for (auto* v : {&a, &b, &c})
      for (double& x : *v) x = std::round(4 * e(gen)) / 4;  // ties included
    const double ab = ks_distance(a, b), ba = ks_distance(b, a), bc = ks_distance(b, c), ac = ks_distance(a, c);
    EXPECT_EQ(ab, ba);
    EXPECT_LE(ac, ab + bc + 1e-15);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
  }
}

TEST(WignerSurmise, GoeSpacingsAreClose) {
  EnsembleOptions opts;
  opts.n = 400;
  opts.samples = 80;
  opts.seed = 10;
  EXPECT_LT(wigner_surmise_distance(spacing_ensemble(Ensemble::goe, opts)), 0.1);
}

TEST(WignerSurmise, PoissonSpacingsAreFar) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> pts(5000);
  for (double& x : pts) x = u(gen);
  auto gaps = consecutive_gaps(pts);
  normalize_mean(gaps);
  SpacingSample s{gaps, 0.5, 0.5};
  EXPECT_GT(wigner_surmise_distance(s), 0.2);
}

TEST(WignerSurmise, EmptySampleRejected) {
  EXPECT_THROW(wigner_surmise_distance(SpacingSample{}), InsufficientDataError);
}

TEST(Ensembles, ModifiedAndPlainGoeSpacingsAgree) {
  EnsembleOptions opts;
  opts.n = 200;
  opts.samples = 100;
  opts.seed = 12;
  const auto goe = spacing_ensemble(Ensemble::goe, opts);
  opts.seed = 13;
  const auto mod = spacing_ensemble(Ensemble::modified_goe, opts);
  EXPECT_LT(ks_distance(goe, mod), 0.08);
  for (double x : mod.spacings) EXPECT_GT(x, 1e-12);
}

TEST(Ensembles, DeterministicAcrossThreadCounts) {
  EnsembleOptions opts;
  opts.n = 60;
  opts.samples = 12;
  opts.seed = 14;
  const auto a = spacing_ensemble(Ensemble::modified_goe, opts);
  opts.threads = 4;
  const auto b = spacing_ensemble(Ensemble::modified_goe, opts);
  EXPECT_EQ(a.spacings, b.spacings);
}

TEST(Gaps, NormalizeMean) {
  std::vector<double> g{1.0, 2.0, 3.0};
  normalize_mean(g);
  EXPECT_DOUBLE_EQ(g[1], 1.0);
  EXPECT_EQ(consecutive_gaps({3.0, 1.0, 2.0}), (std::vector<double>{1.0, 1.0}));
}
