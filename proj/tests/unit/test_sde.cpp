#include "oracles.hpp"
#include "q1dlab/sde.hpp"

#include <gtest/gtest.h>

#include <functional>

using namespace q1dlab;

namespace {

/// Mean and standard error of f over `count` draws.
Estimate draw_moment(int count, const std::function<double()>& f) {
  std::vector<double> v(count);
  for (auto& x : v) x = f();
  return iid_estimate(v);
}

Matrix path_gram(int m) { return overlap_gram(diagonalize(path_graph(m))); }

}  // namespace

TEST(BrownianPair, IncrementStructureIsExact) {
  const BrownianPairSampler sampler(path_gram(4));
  Rng rng(1);
  for (int k = 0; k < 200; ++k) {
    const auto inc = sampler.sample(0.1, rng);
    EXPECT_EQ(inc.dA, inc.dA.adjoint().eval());
    EXPECT_EQ(inc.dB, inc.dB.transpose().eval());
    for (int i = 0; i < 4; ++i) EXPECT_EQ(inc.dA(i, i).imag(), 0.0);
  }
}

TEST(BrownianPair, AssembledCovarianceLayout) {
  const Matrix g = path_gram(3);
  const BrownianPairSampler s(g);
  const Matrix& c = s.covariance();
  ASSERT_EQ(c.rows(), 3 + 6 + 12);
  EXPECT_EQ(c.topLeftCorner(3, 3), g);
  // Re A_01, Im A_01 then Re B_00, Im B_00.
  EXPECT_EQ(c(3, 3), 0.5 * g(0, 1));
  EXPECT_EQ(c(4, 4), 0.5 * g(0, 1));
  EXPECT_EQ(c(9, 9), 0.5 * g(0, 0));
  EXPECT_EQ(c(10, 10), 0.5 * g(0, 0));
  EXPECT_EQ(c(3, 4), 0.0);
  EXPECT_EQ(c(0, 9), 0.0);
}

TEST(BrownianPair, ScalarGramVariances) {
  Matrix g(1, 1);
  g << 0.75;
  const BrownianPairSampler s(g);
  Rng rng(2);
  std::vector<BrownianPairIncrement> draws;
  for (int k = 0; k < 100000; ++k) draws.push_back(s.sample(1.0, rng));
  const auto va = draw_moment(100000, [&, k = 0]() mutable { return std::norm(draws[k++].dA(0, 0)); });
  const auto vr = draw_moment(100000, [&, k = 0]() mutable { return std::pow(draws[k++].dB(0, 0).real(), 2); });
  const auto vi = draw_moment(100000, [&, k = 0]() mutable { return std::pow(draws[k++].dB(0, 0).imag(), 2); });
  EXPECT_LT(std::abs(va.mean - 0.75), 3 * va.se);
  EXPECT_LT(std::abs(vr.mean - 0.375), 3 * vr.se);
  EXPECT_LT(std::abs(vi.mean - 0.375), 3 * vi.se);
}

TEST(BrownianPair, SingleVertexPathGramIsOne) {
  EXPECT_NEAR(path_gram(1)(0, 0), 1.0, 1e-15);
}

TEST(BrownianPair, OffDiagonalComplexSplit) {
  const Matrix g = path_gram(3);
  const BrownianPairSampler s(g);
  Rng rng(3);
  const int count = 50000;
  std::vector<double> re(count), im(count), pseudo(count);
  for (int k = 0; k < count; ++k) {
    const Complex a = s.sample(1.0, rng).dA(0, 1);
    re[k] = a.real() * a.real();
    im[k] = a.imag() * a.imag();
    pseudo[k] = (a * a).real();
  }
  const auto er = iid_estimate(re), ei = iid_estimate(im), ep = iid_estimate(pseudo);
  EXPECT_LT(std::abs(er.mean - g(0, 1) / 2), 3.5 * er.se);
  EXPECT_LT(std::abs(ei.mean - g(0, 1) / 2), 3.5 * ei.se);
  EXPECT_LT(std::abs(ep.mean), 3.5 * ep.se);
}

TEST(BrownianPair, DiagonalCovarianceFidelity) {
  const Matrix g = path_gram(3);
  const BrownianPairSampler s(g);
  Rng rng(4);
  const int count = 50000;
  std::vector<BrownianPairIncrement> draws;
  draws.reserve(count);
  for (int k = 0; k < count; ++k) draws.push_back(s.sample(1.0, rng));
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      const auto e = draw_moment(count, [&, k = 0]() mutable {
        const auto& d = draws[k++];
        return d.dA(i, i).real() * d.dA(j, j).real();
      });
      EXPECT_LT(std::abs(e.mean - g(i, j)), 4 * e.se) << i << j;
    }
}

TEST(BrownianPair, ZeroGramGivesZeroIncrement) {
  const BrownianPairSampler s(Matrix::Zero(3, 3));
  Rng rng(5);
  const auto inc = s.sample(1.0, rng);
  EXPECT_EQ(inc.dA.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(inc.dB.cwiseAbs().maxCoeff(), 0.0);
}

TEST(BrownianPair, RejectsInvalidGram) {
  Matrix bad(2, 2);
  bad << 1, 2, 2, 1;  // eigenvalue -1
  EXPECT_THROW(BrownianPairSampler{bad}, CovarianceError);
  Matrix asym(2, 2);
  asym << 1, 0.1, 0.2, 1;
  EXPECT_THROW(BrownianPairSampler{asym}, CovarianceError);
  Matrix tiny(2, 2);
  tiny << 1, 1 + 1e-12, 1 + 1e-12, 1;  // eigenvalue -1e-12 is clipped
  EXPECT_NO_THROW(BrownianPairSampler{tiny});
}

TEST(BrownianPair, TimeScalingIsExact) {
  const BrownianPairSampler s(path_gram(2));
  Rng r1(6), r2(6);
  const auto a = s.sample(1.0, r1);
  const auto b = s.sample(0.25, r2);
  EXPECT_LT((0.5 * a.dA - b.dA).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((0.5 * a.dB - b.dB).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(GueRepresentation, SingleSiteVariance) {
  Rng rng(7);
  const auto e = draw_moment(100000, [&] { return std::norm(gue_representation_increment(1, 1.0, rng).dA(0, 0)); });
  EXPECT_LT(std::abs(e.mean - 0.75), 3 * e.se);
}

TEST(GueRepresentation, MatchesGramSamplerAwayFromReflectionPairs) {
  const int m = 3, count = 40000;
  const BrownianPairSampler s(path_gram(m));
  Rng ra(8), rb(9);
  std::vector<BrownianPairIncrement> gue, gram;
  for (int k = 0; k < count; ++k) {
    gue.push_back(gue_representation_increment(m, 1.0, ra));
    gram.push_back(s.sample(1.0, rb));
  }
  auto reflected = [&](int i, int j) { return i + j + 2 == m + 1; };  // covers the centre diagonal
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      if (reflected(i, j)) continue;
      using Getter = std::function<double(const BrownianPairIncrement&)>;
      const std::vector<Getter> observables{
          [&](const BrownianPairIncrement& d) { return std::norm(d.dA(i, j)); },
          [&](const BrownianPairIncrement& d) { return std::norm(d.dB(i, j)); },
          [&](const BrownianPairIncrement& d) { return d.dA(i, i).real() * d.dA(j, j).real(); }};
      for (std::size_t o = 0; o < observables.size(); ++o) {
        const auto a = draw_moment(count, [&, k = 0]() mutable { return observables[o](gue[k++]); });
        const auto b = draw_moment(count, [&, k = 0]() mutable { return observables[o](gram[k++]); });
        EXPECT_LT(z_score(a.mean, a.se, b.mean, b.se), 4.0) << i << j << " observable " << o;
      }
    }
}

TEST(GueRepresentation, DtScaling) {
  Rng r1(10), r2(10);
  const auto a = gue_representation_increment(3, 1.0, r1);
  const auto b = gue_representation_increment(3, 0.25, r2);
  EXPECT_LT((0.5 * a.dA - b.dA).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Integrate, StartsAtIdentityAndKeepsGrid) {
  Rng rng(11);
  const auto path = integrate(Vector::Constant(2, 0.8), path_gram(2), Complex(1.0, 0.0), 0.5, 10, rng);
  ASSERT_EQ(path.Y.size(), 11u);
  EXPECT_EQ(path.Y.front(), CMatrix::Identity(4, 4));
  EXPECT_DOUBLE_EQ(path.times.back(), 1.0);
}

TEST(Integrate, NoiseFreeMatchesExponential) {
  for (int m = 1; m <= 3; ++m) {
    const auto f = build_frame(0.3, scale(path_graph(m), 0.6));
    for (double lam : {-2.0, 0.7, 2.0}) {
      Rng rng(12);
      const auto path = integrate(f.s_half, path_gram(m), lam, 0.0, 10000, rng);
      for (std::size_t k : {2500u, 5000u, 10000u})
        EXPECT_LT((path.Y[k] - deterministic_solution(f.s_half, lam, path.times[k])).cwiseAbs().maxCoeff(), 1e-3);
      Rng r2(13);
      const CMatrix y1 = integrate_terminal(f.s_half, BrownianPairSampler(path_gram(m)), lam, 0.0, 10000, r2);
      EXPECT_LT((y1 - path.Y.back()).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Integrate, MeanIsDeterministicSolution) {
  const int m = 2, paths = 1500, steps = 400;
  const auto f = build_frame(0.3, scale(path_graph(m), 0.6));
  const BrownianPairSampler sampler(path_gram(m));
  for (Complex lam : {Complex(0.0), Complex(1.5, 0.0)}) {
    std::vector<std::vector<Complex>> y(4 * m * m, std::vector<Complex>(paths));
    for (int p = 0; p < paths; ++p) {
      Rng rng(mix_seed(14, p));
      const CMatrix yt = integrate_terminal(f.s_half, sampler, lam, 0.7, steps, rng);
      for (int e = 0; e < 4 * m * m; ++e) y[e][p] = yt(e / (2 * m), e % (2 * m));
    }
    const CMatrix target = deterministic_solution(f.s_half, lam, 1.0);
    for (int e = 0; e < 4 * m * m; ++e) {
      const auto est = batched_estimate(y[e]);
      EXPECT_LT(z_score(est, target(e / (2 * m), e % (2 * m))), 4.0) << "entry " << e;
    }
  }
}

TEST(Integrate, StepHalvingConsistency) {
  const int m = 1, paths = 1000;
  const Vector s = Vector::Constant(1, 0.8);
  const BrownianPairSampler sampler(path_gram(m));
  std::vector<double> coarse(paths), fine(paths);
  for (int p = 0; p < paths; ++p) {
    Rng a(mix_seed(15, p)), b(mix_seed(16, p));
    coarse[p] = integrate_terminal(s, sampler, 1.0, 0.5, 200, a).squaredNorm();
    fine[p] = integrate_terminal(s, sampler, 1.0, 0.5, 400, b).squaredNorm();
  }
  const auto c = batched_estimate(coarse), f = batched_estimate(fine);
  EXPECT_LT(z_score(c.mean, c.se, f.mean, f.se), 3.0);
}

TEST(Integrate, DivergenceGuard) {
  Rng rng(17);
  EXPECT_THROW(integrate_terminal(Vector::Constant(1, 1.0), BrownianPairSampler(path_gram(1)), Complex(0.0, -100.0),
                                  0.0, 100, rng),
               DivergenceError);
}

TEST(Integrate, RejectsBadArguments) {
  Rng rng(18);
  EXPECT_THROW(integrate(Vector::Constant(2, 1.0), path_gram(3), 0.0, 0.0, 10, rng), DimensionError);
  EXPECT_THROW(integrate(Vector::Constant(2, 1.0), path_gram(2), 0.0, 0.0, 0, rng), DimensionError);
}

TEST(LimitMatrix, ZeroGramAndSymmetry) {
  Rng rng(19);
  EXPECT_EQ(limit_matrix(Vector::Constant(3, 0.7), Matrix::Zero(3, 3), rng).cwiseAbs().maxCoeff(), 0.0);
  for (int k = 0; k < 50; ++k) {
    const Matrix l = limit_matrix(Vector::Constant(3, 0.7), path_gram(3), rng);
    EXPECT_EQ(l, l.transpose().eval());
  }
}

TEST(LimitMatrix, RealPartOfDifference) {
  const BrownianPairSampler s(path_gram(3));
  Vector sh(3);
  sh << 0.6, 0.7, 0.9;
  Rng a(20), b(20);
  const Matrix l = limit_matrix(sh, s, a);
  const auto inc = s.sample(1.0, b);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) EXPECT_NEAR(l(i, j), sh[i] * sh[j] * (inc.dA(i, j) - inc.dB(i, j)).real(), 1e-15);
  Rng c(20), d(20);
  const Matrix li = limit_matrix(sh, s, c, LimitPart::imag);
  const auto inc2 = s.sample(1.0, d);
  EXPECT_NEAR(li(0, 1), sh[0] * sh[1] * (inc2.dA(0, 1) - inc2.dB(0, 1)).imag(), 1e-15);
}

TEST(DiscreteVsSde, NoiseFreeClosedForm) {
  for (int m : {1, 2}) {
    const auto f = build_frame(0.3, scale(path_graph(m), 0.6));
    const int n = 10000;
    const std::vector<Vector> zero(n, Vector::Zero(m));
    const double lam = 1.3;
    const CMatrix x = evolve_terminal(f, zero, 0.3 + lam / n);
    EXPECT_LT((x - deterministic_solution(f.s_half, lam, 1.0)).cwiseAbs().maxCoeff(), 1e-3);
    DiscreteVsSdeOptions opts;
    opts.sde_steps = 10000;
    const auto rep = discrete_vs_sde_experiment(f, n, lam, 0.0, 2, 1, opts);
    for (const auto& r : rep.rows)
      EXPECT_LT(std::abs(r.discrete.mean - r.continuum.mean), 1e-3) << r.label;
  }
}

TEST(DiscreteVsSde, SmallScaleMomentsAgree) {
  const auto f = build_frame(0.3, path_graph(1));
  DiscreteVsSdeOptions opts;
  opts.sde_steps = 300;
  opts.z_threshold = 4.0;
  const auto rep = discrete_vs_sde_experiment(f, 1500, 0.5, 0.5, 400, 21, opts);
  ASSERT_EQ(rep.rows.size(), 4u);
  for (const auto& r : rep.rows) EXPECT_TRUE(r.pass) << r.label << " z=" << r.z;
}

TEST(DiscreteVsSde, ThreadsDoNotChangeResults) {
  const auto f = build_frame(0.3, scale(path_graph(2), 0.6));
  DiscreteVsSdeOptions one, three;
  one.sde_steps = three.sde_steps = 50;
  three.threads = 3;
  const auto a = discrete_vs_sde_experiment(f, 100, 0.5, 0.5, 20, 22, one);
  const auto b = discrete_vs_sde_experiment(f, 100, 0.5, 0.5, 20, 22, three);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].discrete.mean, b.rows[i].discrete.mean);
    EXPECT_EQ(a.rows[i].continuum.mean, b.rows[i].continuum.mean);
  }
}

TEST(DiscreteVsSde, ComparedEntries) {
  EXPECT_EQ(compared_entries(1).size(), 2u);
  const auto e = compared_entries(3);
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[1], std::make_pair(0, 3));
  EXPECT_THROW(discrete_vs_sde_experiment(build_frame(0.3, path_graph(1)), 10, 0.0, 0.1, 1, 0), StatisticalPowerError);
}
