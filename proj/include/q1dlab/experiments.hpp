#pragma once

// End-to-end desk-scale pipelines: the sigma-ladder transition experiment,
// the Sine_1 pipeline driven by the parameter search, and the Gram matrix of
// product bases.

#include "q1dlab/chaos.hpp"
#include "q1dlab/core.hpp"
#include "q1dlab/lattice.hpp"
#include "q1dlab/parallel.hpp"
#include "q1dlab/random.hpp"
#include "q1dlab/rmt.hpp"
#include "q1dlab/sde.hpp"
#include "q1dlab/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace q1dlab {

/// The base graph G: a path, a Cartesian product of paths, or an explicit matrix.
struct BaseSpec {
  enum class Kind { path, product, matrix };
  Kind kind = Kind::path;
  int m = 1;
  std::vector<int> factors;  // product of paths
  Matrix explicit_matrix;

  SymmetricOperator build(int max_dim = kDefaultMaxDim) const {
    switch (kind) {
      case Kind::path: return path_graph(m);
      case Kind::product: {
        if (factors.empty()) throw DimensionError("product base needs at least one factor");
        SymmetricOperator g = path_graph(factors.front());
        for (std::size_t i = 1; i < factors.size(); ++i)
          g = cartesian_product(g, path_graph(factors[i]), max_dim);
        return g;
      }
      case Kind::matrix: return SymmetricOperator(explicit_matrix);
    }
    throw DimensionError("unknown base kind");
  }
};

inline std::string_view to_string(BaseSpec::Kind k) {
  switch (k) {
    case BaseSpec::Kind::path: return "path";
    case BaseSpec::Kind::product: return "product";
    case BaseSpec::Kind::matrix: return "matrix";
  }
  return "?";
}

struct ExperimentConfig {
  BaseSpec base;
  double r = 1.0;
  double lambda_star = 0.3;
  int n = 64;
  double sigma = 0.5;
  std::vector<double> sigma_ladder{0.0, 0.1, 0.3, 0.5};
  Distribution noise = Distribution::gaussian;
  double window = 8.0;      // half-width in the rescaled variable
  int grid_points = 0;      // 0: automatic
  int trials = 20;
  std::uint64_t master_seed = 0;
  int sde_steps = kDefaultSdeSteps;
  double edge_guard = kDefaultEdgeGuard;
  unsigned threads = 1;

  // Sine_1 pipeline.
  std::vector<int> m_list{1, 2, 3};
  std::vector<double> r_grid;
  SearchOptions search{2000, 0.05, 0.01};
};

/// Guards evaluated before any experiment runs.
struct GuardDiagnostics {
  double band_margin = 0.0;
  double cha = 0.0;
  bool strange_ok = false;
  double defect = 0.0;  // max_j dist((n+1) theta_j, 0)
  std::vector<std::string> warnings;
};

inline GuardDiagnostics evaluate_guards(const RegularizationFrame& frame, int n) {
  GuardDiagnostics g;
  g.band_margin = frame.band_margin();
  const AngleSet q(std::vector<double>(frame.theta.begin(), frame.theta.end()));
  g.cha = chaoticity(q);
  g.defect = angle_defect(q, n);
  g.strange_ok = frame.lambda_star != -2.0 && strange_condition(frame.lambda_star, frame.d);
  if (g.cha < kResonanceThreshold) g.warnings.push_back("critical angles are resonant");
  if (!g.strange_ok) g.warnings.push_back("reference energy violates the ratio condition");
  return g;
}

// ---------------------------------------------------------------------------
// Transition experiment

struct TransitionRung {
  double sigma = 0.0;
  int trials = 0;
  std::vector<double> discrete_points;  // n (lambda - lambda_star), pooled over trials
  std::vector<double> sde_points;       // zeros of the limit secular functional
  std::vector<double> discrete_gaps;
  std::vector<double> sde_gaps;
  double ks_discrete_sde = 0.0;
  std::optional<double> kronecker_error;  // sigma = 0 only
  int resolution_warnings = 0;
};

struct TransitionReport {
  GuardDiagnostics guards;
  std::vector<TransitionRung> rungs;
  std::vector<double> tv_adjacent;  // histogram total variation between consecutive rungs
};

/// Total variation between normalized histograms on [0, upper] with `bins` bins
/// (values beyond `upper` fall into the last bin).
inline double histogram_tv(const std::vector<double>& a, const std::vector<double>& b, int bins,
                           double upper) {
  if (a.empty() || b.empty() || bins < 1 || !(upper > 0.0)) return 0.0;
  auto hist = [&](const std::vector<double>& xs) {
    std::vector<double> h(bins, 0.0);
    for (double x : xs) {
      int k = static_cast<int>(std::floor(x / upper * bins));
      h[std::clamp(k, 0, bins - 1)] += 1.0 / static_cast<double>(xs.size());
    }
    return h;
  };
  const auto ha = hist(a), hb = hist(b);
  double tv = 0.0;
  for (int k = 0; k < bins; ++k) tv += std::abs(ha[k] - hb[k]);
  return 0.5 * tv;
}

namespace detail {

/// det Im(zhat (Y_11 - Y_12)) with zhat diagonal.
inline double limit_secular(const CMatrix& y, const CVector& zhat) {
  const int m = static_cast<int>(zhat.size());
  Matrix im(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) im(i, j) = (zhat[i] * (y(i, j) - y(i, m + j))).imag();
  return im.determinant();
}

inline std::vector<double> gaps_of(std::vector<double> points) { return consecutive_gaps(std::move(points)); }

}  // namespace detail

/// For each sigma in the ladder: the eigenvalues of the box near lambda_star
/// in the variable n (lambda - lambda_star), found as secular-function zeros,
/// against the zeros in lambda of det Im(conj(Z)^{n+1} (Y_1(lambda)_11 - Y_1(lambda)_12)).
inline TransitionReport transition_experiment(const ExperimentConfig& cfg) {
  const SymmetricOperator g = cfg.base.build();
  const SymmetricOperator rg = scale(g, cfg.r);
  const RegularizationFrame frame = build_frame(cfg.lambda_star, rg, cfg.edge_guard);
  const int m = frame.m();
  const int n = cfg.n;
  TransitionReport rep;
  rep.guards = evaluate_guards(frame, n);

  const Matrix gram = overlap_gram(Diagonalization{frame.O, frame.d});
  const BrownianPairSampler sampler(gram);
  CVector zhat(m);
  for (int j = 0; j < m; ++j) zhat[j] = std::conj(frame.z_pow(j, static_cast<long long>(n) + 1));
  const double lo = cfg.lambda_star - cfg.window / n, hi = cfg.lambda_star + cfg.window / n;
  const int sde_grid = cfg.grid_points > 0 ? cfg.grid_points : std::max(64, static_cast<int>(16 * m * cfg.window));

  for (std::size_t rung = 0; rung < cfg.sigma_ladder.size(); ++rung) {
    const double sigma = cfg.sigma_ladder[rung];
    const bool deterministic = sigma == 0.0;
    const int trials = deterministic ? 1 : cfg.trials;
    const std::uint64_t discrete_seed = mix_seed(cfg.master_seed, 2 * rung);
    const std::uint64_t sde_seed = mix_seed(cfg.master_seed, 2 * rung + 1);
    std::vector<std::vector<double>> dpts(trials), spts(trials);
    std::vector<int> warn(trials, 0);
    parallel_for(static_cast<std::size_t>(trials), cfg.threads, [&](std::size_t t) {
      const NoiseSpec noise{cfg.noise, 1.0, mix_seed(discrete_seed, t)};
      const auto slices = box_slices(noise, m, n, sigma / std::sqrt(static_cast<double>(n)));
      TransferSpectrumOptions opts;
      const auto res = counted_transfer_spectrum(frame, slices, lo, hi, opts);
      warn[t] = res.resolution_warning ? 1 : 0;
      for (double v : res.zeros.values()) dpts[t].push_back(n * (v - cfg.lambda_star));

      Rng rng(mix_seed(sde_seed, t));
      const NoisePath path = deterministic ? NoisePath{std::vector<CMatrix>(cfg.sde_steps, CMatrix::Zero(2 * m, 2 * m)),
                                                      1.0 / cfg.sde_steps}
                                           : draw_noise_path(sampler, cfg.sde_steps, rng);
      auto f = [&](double mu) {
        return detail::limit_secular(integrate_terminal(frame.s_half, path, mu, sigma), zhat);
      };
      spts[t] = detail::bracketed_zeros(f, -cfg.window, cfg.window, sde_grid, 1e-9);
    });
    TransitionRung r;
    r.sigma = sigma;
    r.trials = trials;
    for (int t = 0; t < trials; ++t) {
      r.discrete_points.insert(r.discrete_points.end(), dpts[t].begin(), dpts[t].end());
      r.sde_points.insert(r.sde_points.end(), spts[t].begin(), spts[t].end());
      const auto dg = detail::gaps_of(dpts[t]);
      const auto sg = detail::gaps_of(spts[t]);
      r.discrete_gaps.insert(r.discrete_gaps.end(), dg.begin(), dg.end());
      r.sde_gaps.insert(r.sde_gaps.end(), sg.begin(), sg.end());
      r.resolution_warnings += warn[t];
    }
    if (!r.discrete_gaps.empty() && !r.sde_gaps.empty())
      r.ks_discrete_sde = ks_distance(r.discrete_gaps, r.sde_gaps);
    if (deterministic) {
      std::vector<double> oracle;
      for (int j = 0; j < m; ++j)
        for (int k = 1; k <= n; ++k) {
          const double ev = frame.d[j] + 2.0 * std::cos(k * kPi / (n + 1));
          if (ev >= lo && ev <= hi) oracle.push_back(n * (ev - cfg.lambda_star));
        }
      std::sort(oracle.begin(), oracle.end());
      if (oracle.size() == r.discrete_points.size()) {
        double worst = 0.0;
        for (std::size_t i = 0; i < oracle.size(); ++i)
          worst = std::max(worst, std::abs(oracle[i] - r.discrete_points[i]));
        r.kronecker_error = worst;
      } else {
        r.kronecker_error = std::numeric_limits<double>::infinity();
      }
    }
    rep.rungs.push_back(std::move(r));
  }
  double upper = 0.0;
  for (const auto& r : rep.rungs)
    for (double x : r.discrete_gaps) upper = std::max(upper, x);
  for (std::size_t i = 1; i < rep.rungs.size(); ++i)
    rep.tv_adjacent.push_back(histogram_tv(rep.rungs[i - 1].discrete_gaps, rep.rungs[i].discrete_gaps, 20, upper));
  return rep;
}

// ---------------------------------------------------------------------------
// Sine_1 pipeline

struct Sine1Rung {
  int m = 0;
  std::string status;  // ok | insufficient-m | ratio-condition-failed | search-empty | frame-error
  std::string detail;
  std::vector<ParameterCandidate> candidates;  // sorted by defect
  std::optional<ParameterCandidate> chosen;
  double defect_ratio = 0.0;  // max_j |e^{i(n+1) q_j} - 1|
  double sigma = 0.0;
  int trials = 0;
  int shortfall = 0;  // trials with fewer than m zeros in the window
  std::vector<double> discrete_gaps;  // unfolded to mean 1
  std::vector<double> limit_gaps;
  std::vector<double> goe_gaps;
  double ks_discrete_limit = 0.0;
  double ks_discrete_goe = 0.0;
  double ks_limit_goe = 0.0;
  double surmise_discrete = 0.0;
  double surmise_limit = 0.0;
};

struct Sine1Report {
  double lambda_star = 0.0;
  std::vector<Sine1Rung> rungs;
};

/// max(sqrt(defect_ratio), (n cha)^{-1/2}) clipped to [1e-3, 1].
inline double sigma_schedule(double defect_ratio, int n, double cha) {
  const double a = std::sqrt(defect_ratio);
  const double b = cha > 0.0 && n > 0 ? 1.0 / std::sqrt(n * cha) : 1.0;
  return std::clamp(std::max(a, b), 1e-3, 1.0);
}

inline double defect_ratio(const AngleSet& q, int n) {
  double worst = 0.0;
  for (double a : q.angles())
    worst = std::max(worst, std::abs(unit_power(a, static_cast<long long>(n) + 1) - 1.0));
  return worst;
}

/// For each m: search (r, n) for the path base, run the box at the scheduled
/// sigma, take the m eigenvalues nearest lambda_star in n (lambda -
/// lambda_star) / sigma, and compare their unfolded gaps with eig Re(A(1) -
/// B(1)) and with m x m GOE gaps.
inline Sine1Report sine1_pipeline(const ExperimentConfig& cfg) {
  Sine1Report rep;
  rep.lambda_star = cfg.lambda_star;
  for (std::size_t idx = 0; idx < cfg.m_list.size(); ++idx) {
    const int m = cfg.m_list[idx];
    Sine1Rung rung;
    rung.m = m;
    if (m < 2) {
      rung.status = "insufficient-m";
      rung.detail = "the limit matrix is 1x1; spacing statistics are undefined";
      rep.rungs.push_back(std::move(rung));
      continue;
    }
    const SymmetricOperator g = path_graph(m);
    if (!strange_condition(cfg.lambda_star, path_eigenvalues(m))) {
      rung.status = "ratio-condition-failed";
      rung.detail = "(2 - lambda_star)/(2 + lambda_star) equals a ratio of path eigenvalues";
      rep.rungs.push_back(std::move(rung));
      continue;
    }
    const SearchResult found = search_parameters(cfg.lambda_star, g, cfg.r_grid, cfg.search);
    rung.candidates = found.candidates;
    if (found.empty()) {
      rung.status = "search-empty";
      rung.detail = "no r in the grid reached defect <= " + std::to_string(cfg.search.defect_tol) +
                    " with chaoticity >= " + std::to_string(cfg.search.cha_min) +
                    " for n <= " + std::to_string(cfg.search.n_max);
      rep.rungs.push_back(std::move(rung));
      continue;
    }
    const ParameterCandidate best = found.candidates.front();
    rung.chosen = best;
    RegularizationFrame frame;
    try {
      frame = build_frame(cfg.lambda_star, scale(g, best.r), cfg.edge_guard);
    } catch (const FrameError& e) {
      rung.status = "frame-error";
      rung.detail = e.what();
      rep.rungs.push_back(std::move(rung));
      continue;
    }
    const AngleSet q(std::vector<double>(frame.theta.begin(), frame.theta.end()));
    rung.defect_ratio = defect_ratio(q, best.n);
    rung.sigma = sigma_schedule(rung.defect_ratio, best.n, best.cha);
    rung.trials = cfg.trials;
    const int n = best.n;
    const double sigma = rung.sigma;
    const double lo = cfg.lambda_star - cfg.window * sigma / n;
    const double hi = cfg.lambda_star + cfg.window * sigma / n;
    const std::uint64_t base_seed = mix_seed(cfg.master_seed, idx);

    std::vector<std::vector<double>> dgaps(cfg.trials), lgaps(cfg.trials), ggaps(cfg.trials);
    std::vector<int> short_flags(cfg.trials, 0);
    const Matrix gram = overlap_gram(diagonalize(g));
    const BrownianPairSampler sampler(gram);
    const Vector ones = Vector::Ones(m);
    parallel_for(static_cast<std::size_t>(cfg.trials), cfg.threads, [&](std::size_t t) {
      const NoiseSpec noise{cfg.noise, 1.0, mix_seed(mix_seed(base_seed, 0), t)};
      const auto slices = box_slices(noise, m, n, sigma / std::sqrt(static_cast<double>(n)));
      TransferSpectrumOptions opts;
      opts.grid_points = cfg.grid_points > 0 ? cfg.grid_points : 64 * m;
      const auto res = counted_transfer_spectrum(frame, slices, lo, hi, opts);
      std::vector<double> mu;
      for (double v : res.zeros.values()) mu.push_back(n * (v - cfg.lambda_star) / sigma);
      std::sort(mu.begin(), mu.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
      if (static_cast<int>(mu.size()) < m) {
        short_flags[t] = 1;
      } else {
        mu.resize(m);
        dgaps[t] = consecutive_gaps(mu);
      }
      Rng lrng(mix_seed(mix_seed(base_seed, 1), t));
      const Matrix lm = -limit_matrix(ones, sampler, lrng);
      lgaps[t] = consecutive_gaps(detail::symmetric_eigenvalues(lm));
      Rng grng(mix_seed(mix_seed(base_seed, 2), t));
      ggaps[t] = consecutive_gaps(sample_goe(m, grng).values());
    });
    for (int t = 0; t < cfg.trials; ++t) {
      rung.shortfall += short_flags[t];
      rung.discrete_gaps.insert(rung.discrete_gaps.end(), dgaps[t].begin(), dgaps[t].end());
      rung.limit_gaps.insert(rung.limit_gaps.end(), lgaps[t].begin(), lgaps[t].end());
      rung.goe_gaps.insert(rung.goe_gaps.end(), ggaps[t].begin(), ggaps[t].end());
    }
    normalize_mean(rung.discrete_gaps);
    normalize_mean(rung.limit_gaps);
    normalize_mean(rung.goe_gaps);
    if (rung.discrete_gaps.empty()) {
      rung.status = "insufficient-data";
      rung.detail = "no trial produced m zeros in the window";
      rep.rungs.push_back(std::move(rung));
      continue;
    }
    rung.ks_discrete_limit = ks_distance(rung.discrete_gaps, rung.limit_gaps);
    rung.ks_discrete_goe = ks_distance(rung.discrete_gaps, rung.goe_gaps);
    rung.ks_limit_goe = ks_distance(rung.limit_gaps, rung.goe_gaps);
    rung.surmise_discrete = ks_distance_to(rung.discrete_gaps, wigner_surmise_cdf);
    rung.surmise_limit = ks_distance_to(rung.limit_gaps, wigner_surmise_cdf);
    rung.status = "ok";
    rep.rungs.push_back(std::move(rung));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Product bases

struct HigherDimGram {
  std::vector<std::vector<int>> indices;  // multi-index of each row, 0-based
  Matrix brute;                           // from the tensor-product eigenvectors
  Matrix formula;                         // prod_l (1 + 1{i_l = j_l} / 2) / prod_l (m_l + 1)
  std::vector<std::pair<int, int>> disagreements;
};

/// Gram matrix of the product of paths m_1 x ... x m_d. Eigenvectors are
/// tensor products of path eigenvectors; the last factor runs fastest.
inline HigherDimGram higher_dim_gram(const std::vector<int>& m_list, double tol = 1e-12) {
  if (m_list.empty()) throw DimensionError("higher_dim_gram needs at least one factor");
  std::vector<Matrix> factors;
  long long total = 1;
  double denom = 1.0;
  for (int m : m_list) {
    factors.push_back(diagonalize(path_graph(m)).O);
    total *= m;
    denom *= m + 1;
    if (total > kDefaultMaxDim) throw SizeError("product base too large for higher_dim_gram");
  }
  const int dim = static_cast<int>(total);
  HigherDimGram out;
  out.indices.resize(dim);
  for (int a = 0; a < dim; ++a) {
    int rem = a;
    std::vector<int> idx(m_list.size());
    for (int l = static_cast<int>(m_list.size()) - 1; l >= 0; --l) {
      idx[l] = rem % m_list[l];
      rem /= m_list[l];
    }
    out.indices[a] = idx;
  }
  // Squared components: sq(x, a) = prod_l O^{(l)}(x_l, i_l)^2 over vertices x.
  Matrix sq(dim, dim);
  for (int x = 0; x < dim; ++x)
    for (int a = 0; a < dim; ++a) {
      double v = 1.0;
      for (std::size_t l = 0; l < m_list.size(); ++l) {
        const double o = factors[l](out.indices[x][l], out.indices[a][l]);
        v *= o * o;
      }
      sq(x, a) = v;
    }
  out.brute = sq.transpose() * sq;
  out.formula = Matrix(dim, dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      double v = 1.0;
      for (std::size_t l = 0; l < m_list.size(); ++l)
        if (out.indices[a][l] == out.indices[b][l]) v *= 1.5;
      out.formula(a, b) = v / denom;
      if (std::abs(out.formula(a, b) - out.brute(a, b)) > tol) out.disagreements.emplace_back(a, b);
    }
  return out;
}

}  // namespace q1dlab
