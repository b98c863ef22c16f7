#pragma once

// Command implementations behind the q1dlab executable. Each command reads a
// Config, runs the library, and returns the files it produced.

#include "q1dlab/chaos.hpp"
#include "q1dlab/config.hpp"
#include "q1dlab/experiments.hpp"
#include "q1dlab/lattice.hpp"
#include "q1dlab/oscillatory.hpp"
#include "q1dlab/report.hpp"
#include "q1dlab/rmt.hpp"
#include "q1dlab/sde.hpp"
#include "q1dlab/transfer.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace q1dlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitGuard = 3;
inline constexpr int kExitNumeric = 4;

struct RunContext {
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Seed from [run] seed unless overridden on the command line.
inline std::uint64_t resolve_seed(const Config& cfg, std::optional<std::uint64_t> override_seed) {
  return override_seed ? *override_seed : cfg.u64("run.seed", 0);
}

inline int positive_int(const Config& cfg, const std::string& key, long long fallback, long long min = 1) {
  const long long v = cfg.integer(key, fallback);
  if (v < min || v > 2'000'000'000LL)
    throw ConfigError(cfg.source() + ": field '" + key + "' must be an integer >= " + std::to_string(min));
  return static_cast<int>(v);
}

inline BaseSpec parse_base(const Config& cfg) {
  BaseSpec b;
  const std::string kind = cfg.str("base.kind", "path");
  if (kind == "path") {
    b.kind = BaseSpec::Kind::path;
    b.m = positive_int(cfg, "base.m", 1);
  } else if (kind == "product") {
    b.kind = BaseSpec::Kind::product;
    for (long long f : cfg.integers("base.factors")) {
      if (f < 1) throw ConfigError(cfg.source() + ": field 'base.factors' needs positive entries");
      b.factors.push_back(static_cast<int>(f));
    }
  } else if (kind == "matrix") {
    b.kind = BaseSpec::Kind::matrix;
    b.explicit_matrix = cfg.matrix("base.matrix");
  } else {
    throw ConfigError(cfg.source() + ": field 'base.kind' must be path, product or matrix, got '" + kind + "'");
  }
  return b;
}

inline Distribution parse_noise(const Config& cfg) { return parse_distribution(cfg.str("model.noise", "gaussian")); }

struct Model {
  SymmetricOperator g;
  double r;
  SymmetricOperator rg;
  double lambda_star;
  double edge_guard;
};

inline Model parse_model(const Config& cfg) {
  const BaseSpec base = parse_base(cfg);
  SymmetricOperator g = base.build();
  const double r = cfg.real("base.r", 1.0);
  SymmetricOperator rg = scale(g, r);
  return {std::move(g), r, std::move(rg), cfg.real("model.lambda_star"),
          cfg.real("model.edge_guard", kDefaultEdgeGuard)};
}

inline std::vector<std::string> complex_cells(Complex z) { return {fmt(z.real()), fmt(z.imag())}; }

// ---------------------------------------------------------------------------

inline RunOutput cmd_spectrum(const Config& cfg, const RunContext& ctx, RunOutput out) {
  const Model model = parse_model(cfg);
  const int n = positive_int(cfg, "model.n", 0);
  const double sigma = cfg.real("model.sigma", 0.0);
  const RegularizationFrame frame = build_frame(model.lambda_star, model.rg, model.edge_guard);
  const int m = frame.m();
  double lo, hi;
  if (cfg.has("spectrum.window_lo") || cfg.has("spectrum.window_hi")) {
    lo = cfg.real("spectrum.window_lo");
    hi = cfg.real("spectrum.window_hi");
  } else {
    lo = frame.d.maxCoeff() - 1.9;
    hi = frame.d.minCoeff() + 1.9;
    if (!(lo < hi))
      throw ConfigError(cfg.source() + ": channel bands do not overlap; set spectrum.window_lo and spectrum.window_hi");
  }
  const NoiseSpec noise{parse_noise(cfg), 1.0, ctx.seed};
  const double prefactor = sigma / std::sqrt(static_cast<double>(n));
  const auto slices = box_slices(noise, m, n, prefactor);
  const SymmetricOperator box = assemble_box(model.g, model.r, n, noise, prefactor);
  const SpectrumSample direct = direct_spectrum(box);

  TransferSpectrumOptions opts;
  opts.grid_points = positive_int(cfg, "spectrum.grid_points", 0, 0);
  opts.tol = cfg.real("spectrum.tol", 1e-10);
  opts.expected_count = count_eigenvalues_in(frame.G, slices, lo, hi);
  const auto res = transfer_spectrum(frame, slices, lo, hi, opts);

  CsvTable dt({"index", "eigenvalue", "in_window"});
  for (std::size_t i = 0; i < direct.size(); ++i) {
    const double v = direct.values()[i];
    dt.row(i, v, v >= lo && v <= hi);
  }
  CsvTable tt({"index", "zero"});
  for (std::size_t i = 0; i < res.zeros.size(); ++i) tt.row(i, res.zeros.values()[i]);

  const SpectrumSample inside = direct.restricted(lo, hi);
  double max_err = std::numeric_limits<double>::quiet_NaN();
  if (inside.size() == res.zeros.size()) {
    max_err = 0.0;
    for (std::size_t i = 0; i < inside.size(); ++i)
      max_err = std::max(max_err, std::abs(inside.values()[i] - res.zeros.values()[i]));
  }
  CsvTable st({"quantity", "value"});
  st.row("window_lo", lo);
  st.row("window_hi", hi);
  st.row("direct_count", inside.size());
  st.row("transfer_count", res.zeros.size());
  st.row("max_pairing_error", max_err);
  st.row("grid_points", res.grid_points);
  st.row("refinements", res.refinements);
  st.row("resolution_warning", res.resolution_warning);
  st.row("band_margin", frame.band_margin());
  out.add("direct.csv", dt);
  out.add("transfer.csv", tt);
  out.add("summary.csv", st);
  return out;
}

inline RunOutput cmd_noise_cov(const Config& cfg, const RunContext& ctx, RunOutput out) {
  const Model model = parse_model(cfg);
  const RegularizationFrame frame = build_frame(model.lambda_star, model.rg, model.edge_guard);
  const int n = positive_int(cfg, "noise_cov.n", 0);
  const int trials = positive_int(cfg, "noise_cov.trials", 0);
  const NoiseSpec noise{parse_noise(cfg), 1.0, ctx.seed};
  const double zmax = cfg.real("noise_cov.z_threshold", 3.0);
  const CovarianceReport rep = covariance_experiment(frame, n, trials, noise, ctx.threads, zmax);

  CsvTable ct({"kind", "i", "j", "ip", "jp", "empirical_re", "empirical_im", "se_re", "se_im",
               "theoretical_re", "theoretical_im", "z", "must_vanish", "verdict"});
  for (const auto& r : rep.rows) {
    const std::string verdict = !r.pass ? "none" : (*r.pass ? "pass" : "fail");
    ct.row(to_string(r.kind), r.i + 1, r.j + 1, r.ip + 1, r.jp + 1, r.empirical.mean.real(),
           r.empirical.mean.imag(), r.empirical.se_re, r.empirical.se_im, r.theoretical.real(),
           r.theoretical.imag(), r.z, r.must_vanish, verdict);
  }
  const Matrix gram = overlap_gram(Diagonalization{frame.O, frame.d});
  CsvTable gt({"i", "j", "gram"});
  for (int i = 0; i < gram.rows(); ++i)
    for (int j = 0; j < gram.cols(); ++j) gt.row(i + 1, j + 1, gram(i, j));
  CsvTable st({"quantity", "value"});
  st.row("n_steps", rep.n_steps);
  st.row("n_trials", rep.n_trials);
  st.row("chaoticity", rep.cha);
  st.row("z_threshold", rep.z_threshold);
  st.row("warning", rep.warning.value_or("none"));
  st.row("all_pass", rep.warning ? std::string("none") : fmt(rep.all_pass()));
  out.add("covariance.csv", ct);
  out.add("gram.csv", gt);
  out.add("summary.csv", st);
  return out;
}

inline RunOutput cmd_chaoticity(const Config& cfg, const RunContext&, RunOutput out) {
  std::vector<double> raw;
  if (cfg.has("chaoticity.angles")) {
    raw = cfg.reals("chaoticity.angles");
  } else {
    const Model model = parse_model(cfg);
    const AngleSet q = critical_angles(model.lambda_star, model.r, diagonalize(model.g).d);
    raw = q.angles();
  }
  if (raw.empty()) throw ConfigError(cfg.source() + ": no angles given");
  const AngleSet set(raw);
  CsvTable at({"index", "input", "reduced"});
  for (std::size_t i = 0; i < raw.size(); ++i) at.row(i + 1, raw[i], set[i]);
  CsvTable st({"quantity", "value"});
  st.row("m", set.size());
  st.row("chaoticity", chaoticity(set));
  if (set.size() <= 12) st.row("chaoticity_bruteforce", chaoticity_bruteforce(set));
  out.add("angles.csv", at);
  out.add("summary.csv", st);
  return out;
}

inline std::vector<double> parse_r_grid(const Config& cfg, const std::string& section) {
  if (cfg.has(section + ".r_grid")) return cfg.reals(section + ".r_grid");
  const double lo = cfg.real(section + ".r_min");
  const double hi = cfg.real(section + ".r_max");
  const int count = positive_int(cfg, section + ".r_count", 0);
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) grid[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  return grid;
}

inline SearchOptions parse_search_options(const Config& cfg, const std::string& section, SearchOptions d = {}) {
  d.n_max = positive_int(cfg, section + ".n_max", d.n_max);
  d.defect_tol = cfg.real(section + ".defect_tol", d.defect_tol);
  d.cha_min = cfg.real(section + ".cha_min", d.cha_min);
  return d;
}

inline RunOutput cmd_search(const Config& cfg, const RunContext&, RunOutput out) {
  const Model model = parse_model(cfg);
  const SearchOptions opts = parse_search_options(cfg, "search");
  const auto grid = parse_r_grid(cfg, "search");
  const SearchResult res = search_parameters(model.lambda_star, model.g, grid, opts);
  CsvTable ct({"rank", "r", "n", "defect", "cha", "n_cha", "strange_ok"});
  for (std::size_t i = 0; i < res.candidates.size(); ++i) {
    const auto& c = res.candidates[i];
    ct.row(i + 1, c.r, c.n, c.defect, c.cha, c.n_cha(), c.strange_ok);
  }
  CsvTable dt({"r", "in_band", "cha", "best_n", "best_defect", "status"});
  for (const auto& d : res.diagnostics) dt.row(d.r, d.in_band, d.cha, d.best_n, d.best_defect, d.status);
  CsvTable st({"quantity", "value"});
  st.row("candidates", res.candidates.size());
  st.row("status", res.empty() ? "empty" : "found");
  st.row("n_max", opts.n_max);
  st.row("defect_tol", opts.defect_tol);
  st.row("cha_min", opts.cha_min);
  out.add("candidates.csv", ct);
  out.add("diagnostics.csv", dt);
  out.add("summary.csv", st);
  return out;
}

inline RunOutput cmd_sde(const Config& cfg, const RunContext& ctx, RunOutput out) {
  const Model model = parse_model(cfg);
  const RegularizationFrame frame = build_frame(model.lambda_star, model.rg, model.edge_guard);
  const int m = frame.m();
  const Complex lambda(cfg.real("sde.lambda", 1.0), cfg.real("sde.lambda_im", 0.0));
  const double sigma = cfg.real("sde.sigma", 0.5);
  const int steps = positive_int(cfg, "sde.steps", kDefaultSdeSteps);
  const int paths = positive_int(cfg, "sde.paths", 1000, 2);
  const Matrix gram = overlap_gram(Diagonalization{frame.O, frame.d});
  const BrownianPairSampler sampler(gram);

  // Noise-free integration against the exact exponential.
  {
    Rng rng(ctx.seed);
    const CMatrix y = integrate_terminal(frame.s_half, sampler, lambda, 0.0, steps, rng);
    const CMatrix exact = deterministic_solution(frame.s_half, lambda, 1.0);
    CsvTable t({"steps", "max_abs_error"});
    t.row(steps, (y - exact).cwiseAbs().maxCoeff());
    out.add("closed_form.csv", t);
  }
  // Monte Carlo mean of Y_1.
  {
    std::vector<CMatrix> ys(paths);
    parallel_for(static_cast<std::size_t>(paths), ctx.threads, [&](std::size_t p) {
      Rng rng(mix_seed(ctx.seed, p));
      ys[p] = integrate_terminal(frame.s_half, sampler, lambda, sigma, steps, rng);
    });
    const CMatrix target = deterministic_solution(frame.s_half, lambda, 1.0);
    CsvTable t({"row", "col", "mean_re", "mean_im", "se_re", "se_im", "target_re", "target_im", "z"});
    std::vector<Complex> vals(paths);
    for (int i = 0; i < 2 * m; ++i)
      for (int j = 0; j < 2 * m; ++j) {
        for (int p = 0; p < paths; ++p) vals[p] = ys[p](i, j);
        const ComplexEstimate e = batched_estimate(vals);
        t.row(i + 1, j + 1, e.mean.real(), e.mean.imag(), e.se_re, e.se_im, target(i, j).real(),
              target(i, j).imag(), z_score(e, target(i, j)));
      }
    out.add("mean.csv", t);
  }
  // Limit-matrix moments.
  if (const int samples = positive_int(cfg, "sde.limit_samples", 0, 0); samples > 0) {
    const LimitPart part = cfg.str("sde.limit_part", "real") == "imag" ? LimitPart::imag : LimitPart::real;
    std::vector<Matrix> ls(samples);
    parallel_for(static_cast<std::size_t>(samples), ctx.threads, [&](std::size_t s) {
      Rng rng(mix_seed(ctx.seed ^ 0x4c494d4954ULL, s));
      ls[s] = limit_matrix(frame.s_half, sampler, rng, part);
    });
    CsvTable t({"row", "col", "mean", "mean_se", "second_moment", "second_moment_se"});
    std::vector<double> v(samples), v2(samples);
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        for (int s = 0; s < samples; ++s) {
          v[s] = ls[s](i, j);
          v2[s] = v[s] * v[s];
        }
        const Estimate e1 = batched_estimate(v), e2 = batched_estimate(v2);
        t.row(i + 1, j + 1, e1.mean, e1.se, e2.mean, e2.se);
      }
    out.add("limit_matrix.csv", t);
  }
  // Lattice against continuum.
  if (const int n = positive_int(cfg, "sde.discrete_n", 0, 0); n > 0) {
    DiscreteVsSdeOptions opts;
    opts.sde_steps = steps;
    opts.threads = ctx.threads;
    opts.distribution = parse_noise(cfg);
    const int trials = positive_int(cfg, "sde.discrete_trials", paths, 2);
    const MomentReport rep = discrete_vs_sde_experiment(frame, n, lambda, sigma, trials, ctx.seed, opts);
    CsvTable t({"observable", "discrete_re", "discrete_im", "discrete_se", "continuum_re", "continuum_im",
                "continuum_se", "z", "pass"});
    for (const auto& r : rep.rows)
      t.row(r.label, r.discrete.mean.real(), r.discrete.mean.imag(), r.discrete.se(), r.continuum.mean.real(),
            r.continuum.mean.imag(), r.continuum.se(), r.z, r.pass);
    out.add("discrete_vs_sde.csv", t);
  }
  return out;
}

inline RunOutput cmd_gaps(const Config& cfg, const RunContext& ctx, RunOutput out) {
  EnsembleOptions opts;
  opts.n = positive_int(cfg, "gaps.n", 300, 2);
  opts.samples = positive_int(cfg, "gaps.samples", 200);
  opts.center = cfg.real("gaps.center", 0.0);
  opts.window_halfwidth = cfg.real("gaps.halfwidth", 0.2);
  opts.threads = ctx.threads;
  opts.seed = mix_seed(ctx.seed, 0);
  const SpacingSample goe = spacing_ensemble(Ensemble::goe, opts);
  opts.seed = mix_seed(ctx.seed, 1);
  const SpacingSample mod = spacing_ensemble(Ensemble::modified_goe, opts);
  CsvTable kt({"comparison", "ks_distance", "count_a", "count_b"});
  kt.row("goe_vs_modified", ks_distance(goe, mod), goe.spacings.size(), mod.spacings.size());
  kt.row("goe_vs_surmise", wigner_surmise_distance(goe), goe.spacings.size(), 0);
  kt.row("modified_vs_surmise", wigner_surmise_distance(mod), mod.spacings.size(), 0);
  kt.row("goe_mean_spacing", goe.mean(), goe.spacings.size(), 0);
  kt.row("modified_mean_spacing", mod.mean(), mod.spacings.size(), 0);
  auto spacing_table = [](const SpacingSample& s) {
    CsvTable t({"index", "spacing"});
    for (std::size_t i = 0; i < s.spacings.size(); ++i) t.row(i, s.spacings[i]);
    return t;
  };
  out.add("ks.csv", kt);
  out.add("spacings_goe.csv", spacing_table(goe));
  out.add("spacings_modified.csv", spacing_table(mod));
  return out;
}

inline ExperimentConfig parse_experiment(const Config& cfg, const RunContext& ctx) {
  ExperimentConfig e;
  const std::string kind = cfg.str("experiment.kind");
  if (kind != "higher-dim-gram") {
    e.base = parse_base(cfg);
    e.r = cfg.real("base.r", 1.0);
    e.lambda_star = cfg.real("model.lambda_star");
    e.edge_guard = cfg.real("model.edge_guard", kDefaultEdgeGuard);
  }
  e.n = positive_int(cfg, "model.n", e.n);
  e.noise = parse_noise(cfg);
  e.sigma_ladder = cfg.reals("experiment.sigma_ladder", e.sigma_ladder);
  e.window = cfg.real("experiment.window", e.window);
  e.grid_points = positive_int(cfg, "experiment.grid_points", 0, 0);
  e.trials = positive_int(cfg, "experiment.trials", e.trials);
  e.sde_steps = positive_int(cfg, "experiment.sde_steps", e.sde_steps);
  e.master_seed = ctx.seed;
  e.threads = ctx.threads;
  if (cfg.has("experiment.m_list")) {
    e.m_list.clear();
    for (long long v : cfg.integers("experiment.m_list")) e.m_list.push_back(static_cast<int>(v));
  }
  if (kind == "sine1") {
    e.r_grid = parse_r_grid(cfg, "search");
    e.search = parse_search_options(cfg, "search", e.search);
  }
  return e;
}

inline void add_guards(RunOutput& out, const GuardDiagnostics& g) {
  CsvTable t({"guard", "value"});
  t.row("band_margin", g.band_margin);
  t.row("chaoticity", g.cha);
  t.row("ratio_condition", g.strange_ok);
  t.row("defect", g.defect);
  for (const auto& w : g.warnings) t.row("warning", w);
  out.add("guards.csv", t);
}

inline RunOutput cmd_experiment(const Config& cfg, const RunContext& ctx, RunOutput out) {
  const std::string kind = cfg.str("experiment.kind");
  out.add_text("config.txt", cfg.canonical());
  if (kind == "higher-dim-gram") {
    std::vector<int> ms;
    for (long long v : cfg.integers("experiment.factors")) ms.push_back(static_cast<int>(v));
    const HigherDimGram hg = higher_dim_gram(ms);
    auto label = [](const std::vector<int>& idx) {
      std::string s;
      for (std::size_t l = 0; l < idx.size(); ++l) s += (l ? ":" : "") + std::to_string(idx[l] + 1);
      return s;
    };
    CsvTable t({"i", "j", "brute_force", "product_formula", "agree"});
    for (int a = 0; a < hg.brute.rows(); ++a)
      for (int b = 0; b < hg.brute.cols(); ++b)
        t.row(label(hg.indices[a]), label(hg.indices[b]), hg.brute(a, b), hg.formula(a, b),
              std::abs(hg.brute(a, b) - hg.formula(a, b)) <= 1e-12);
    out.add("gram.csv", t);
    return out;
  }
  const ExperimentConfig e = parse_experiment(cfg, ctx);
  if (kind == "transition") {
    const TransitionReport rep = transition_experiment(e);
    add_guards(out, rep.guards);
    CsvTable rt({"sigma", "trials", "discrete_points", "sde_points", "discrete_mean_gap", "sde_mean_gap",
                 "ks_discrete_sde", "kronecker_error", "resolution_warnings"});
    CsvTable pt({"sigma", "source", "value"});
    for (const auto& r : rep.rungs) {
      auto mean = [](const std::vector<double>& xs) {
        if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
        double s = 0.0;
        for (double x : xs) s += x;
        return s / static_cast<double>(xs.size());
      };
      rt.row(r.sigma, r.trials, r.discrete_points.size(), r.sde_points.size(), mean(r.discrete_gaps),
             mean(r.sde_gaps), r.ks_discrete_sde,
             r.kronecker_error.value_or(std::numeric_limits<double>::quiet_NaN()), r.resolution_warnings);
      for (double x : r.discrete_points) pt.row(r.sigma, "discrete", x);
      for (double x : r.sde_points) pt.row(r.sigma, "sde", x);
    }
    CsvTable tv({"sigma_a", "sigma_b", "total_variation"});
    for (std::size_t i = 0; i < rep.tv_adjacent.size(); ++i)
      tv.row(rep.rungs[i].sigma, rep.rungs[i + 1].sigma, rep.tv_adjacent[i]);
    out.add("rungs.csv", rt);
    out.add("points.csv", pt);
    out.add("continuity.csv", tv);
    return out;
  }
  if (kind == "sine1") {
    const Sine1Report rep = sine1_pipeline(e);
    CsvTable rt({"m", "status", "r", "n", "defect", "cha", "n_cha", "defect_ratio", "sigma", "trials",
                 "shortfall", "ks_discrete_limit", "ks_discrete_goe", "ks_limit_goe", "surmise_discrete",
                 "surmise_limit", "detail"});
    CsvTable ct({"m", "rank", "r", "n", "defect", "cha", "n_cha"});
    CsvTable gt({"m", "source", "gap"});
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : rep.rungs) {
      const ParameterCandidate c = r.chosen.value_or(ParameterCandidate{nan, 0, nan, nan, false});
      rt.row(r.m, r.status, c.r, c.n, c.defect, c.cha, c.n_cha(), r.defect_ratio, r.sigma, r.trials, r.shortfall,
             r.ks_discrete_limit, r.ks_discrete_goe, r.ks_limit_goe, r.surmise_discrete, r.surmise_limit,
             r.detail.empty() ? std::string("-") : r.detail);
      for (std::size_t i = 0; i < r.candidates.size(); ++i) {
        const auto& k = r.candidates[i];
        ct.row(r.m, i + 1, k.r, k.n, k.defect, k.cha, k.n_cha());
      }
      for (double x : r.discrete_gaps) gt.row(r.m, "discrete", x);
      for (double x : r.limit_gaps) gt.row(r.m, "limit", x);
      for (double x : r.goe_gaps) gt.row(r.m, "goe", x);
    }
    out.add("rungs.csv", rt);
    out.add("candidates.csv", ct);
    out.add("gaps.csv", gt);
    return out;
  }
  throw ConfigError(cfg.source() + ": field 'experiment.kind' must be transition, sine1 or higher-dim-gram, got '" +
                    kind + "'");
}

using Command = std::function<RunOutput(const Config&, const RunContext&, RunOutput)>;

inline const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"spectrum", cmd_spectrum}, {"noise-cov", cmd_noise_cov}, {"chaoticity", cmd_chaoticity},
      {"search", cmd_search},     {"sde", cmd_sde},             {"gaps", cmd_gaps},
      {"experiment", cmd_experiment}};
  return table;
}

/// Runs `command` on `cfg`; the output is fully determined by (command,
/// canonical config, seed, version).
inline RunOutput run_command(const std::string& command, const Config& cfg,
                             std::optional<std::uint64_t> seed_override, unsigned threads) {
  const auto it = commands().find(command);
  if (it == commands().end()) throw ConfigError("unknown command '" + command + "'");
  RunContext ctx{resolve_seed(cfg, seed_override), std::max(1u, threads)};
  RunOutput out(command, fnv1a64(cfg.canonical()), ctx.seed);
  return it->second(cfg, ctx, std::move(out));
}

inline int exit_code(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const GuardError*>(&e)) return kExitGuard;
  if (dynamic_cast<const NumericError*>(&e)) return kExitNumeric;
  return 1;
}

}  // namespace q1dlab::cli
