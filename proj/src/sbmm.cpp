#include "marl/sbmm.hpp"

#include <algorithm>
#include <cmath>

namespace marl {

std::vector<double> project_simplex(std::span<const double> v) {
  for (double x : v) check(std::isfinite(x), "project_simplex: non-finite input");
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double running = 0.0;
  double tau = 0.0;
  int support = 0;
  for (int k = 0; k < static_cast<int>(sorted.size()); ++k) {
    running += sorted[k];
    const double candidate = (running - 1.0) / (k + 1);
    if (sorted[k] - candidate > 0.0) {
      tau = candidate;
      support = k + 1;
    }
  }
  (void)support;
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(0.0, v[i] - tau);
  return out;
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL + (tag << 6) + (tag >> 2));
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  return x;
}

struct InnerScan {
  double value = 0.0;
  int index = 0;
};

std::vector<double> point_mass(int index, int dim) {
  std::vector<double> out(dim, 0.0);
  out[index] = 1.0;
  return out;
}

// Exact scan over the min player's deterministic columns.
InnerScan scan_columns(const StageProblem& p, std::span<const double> mu) {
  InnerScan best{kInfinity, 0};
  std::vector<double> point(p.num_b, 0.0);
  for (int b = 0; b < p.num_b; ++b) {
    point[b] = 1.0;
    double linear = 0.0;
    for (int a = 0; a < p.num_a; ++a) linear += mu[a] * p.payoff[a * p.num_b + b];
    const double value =
        linear - stage_bonus_2p(p.params, p.counts, p.num_a, p.num_b, mu, point);
    point[b] = 0.0;
    if (value < best.value) {
      best.value = value;
      best.index = b;
    }
  }
  return best;
}

// Exact scan over the max player's deterministic rows.
InnerScan scan_rows(const StageProblem& p, std::span<const double> nu) {
  InnerScan best{-kInfinity, 0};
  std::vector<double> point(p.num_a, 0.0);
  for (int a = 0; a < p.num_a; ++a) {
    point[a] = 1.0;
    double linear = 0.0;
    for (int b = 0; b < p.num_b; ++b) linear += nu[b] * p.payoff[a * p.num_b + b];
    const double value =
        linear + stage_bonus_2p(p.params, p.counts, p.num_a, p.num_b, point, nu);
    point[a] = 0.0;
    if (value > best.value) {
      best.value = value;
      best.index = a;
    }
  }
  return best;
}

long long resolve_iterations(const StageProblem& p, const OptimizerConfig& opt, double eps) {
  if (opt.max_iters > 0) return opt.max_iters;
  const double lipschitz = lipschitz_constant(p.params);
  const double t = std::ceil(lipschitz * lipschitz / (eps * eps));
  if (!(t < 9.0e18)) return 9'000'000'000'000'000'000LL;
  return std::max(1LL, static_cast<long long>(t));
}

double resolve_eps(const StageProblem& p, const OptimizerConfig& opt) {
  if (opt.eps_opt > 0.0) return opt.eps_opt;
  return 1.0 / std::sqrt(static_cast<double>(p.params.n));
}

// Shared PGD loop; `minimize` switches between the concave maximin ascent
// and the convex minimax descent. Every iterate and the running average are
// certified by the exact inner scan; the best certified point wins.
StageOutcome pgd_stage(const StageProblem& p, const OptimizerConfig& opt, bool minimize) {
  const int dim = minimize ? p.num_b : p.num_a;
  const double eps = resolve_eps(p, opt);
  const long long max_iters = resolve_iterations(p, opt, eps);
  const double lipschitz = lipschitz_constant(p.params);
  const double step = std::sqrt(2.0) / (lipschitz * std::sqrt(static_cast<double>(max_iters)));

  Rng rng(mix_seed(opt.seed, minimize ? 2 : 1));
  std::vector<double> x = rng.simplex_point(dim);
  std::vector<double> average = x;

  const auto certify = [&](std::span<const double> point) {
    return minimize ? scan_rows(p, point) : scan_columns(p, point);
  };

  StageOutcome best;
  best.outer = x;
  {
    const InnerScan scan = certify(x);
    best.value = scan.value;
    best.inner_index = scan.index;
  }
  const auto consider = [&](const std::vector<double>& point, const InnerScan& scan) {
    const bool better = minimize ? scan.value < best.value : scan.value > best.value;
    if (better) {
      best.outer = point;
      best.value = scan.value;
      best.inner_index = scan.index;
    }
  };

  const long long window = std::max(1LL, max_iters / 10);
  double checkpoint_value = best.value;
  long long t = 0;
  for (t = 0; t < max_iters; ++t) {
    const InnerScan scan = certify(x);
    consider(x, scan);
    // Subgradient of the certified objective through the active inner reply.
    std::vector<double> grad(dim, 0.0);
    if (minimize) {
      const int a = scan.index;
      const auto bonus_grad =
          bonus_gradient_2p(p.params, p.counts, p.num_a, p.num_b,
                            std::vector<double>(point_mass(a, p.num_a)), x, 1);
      for (int b = 0; b < p.num_b; ++b) grad[b] = p.payoff[a * p.num_b + b] + bonus_grad[b];
      for (int b = 0; b < p.num_b; ++b) x[b] -= step * grad[b];
    } else {
      const int b = scan.index;
      const auto bonus_grad =
          bonus_gradient_2p(p.params, p.counts, p.num_a, p.num_b, x,
                            std::vector<double>(point_mass(b, p.num_b)), 0);
      for (int a = 0; a < p.num_a; ++a) grad[a] = p.payoff[a * p.num_b + b] - bonus_grad[a];
      for (int a = 0; a < p.num_a; ++a) x[a] += step * grad[a];
    }
    x = project_simplex(x);
    const double weight = 1.0 / static_cast<double>(t + 2);
    for (int i = 0; i < dim; ++i) average[i] += weight * (x[i] - average[i]);
    consider(average, certify(average));
    if (opt.early_stopping && (t + 1) % window == 0) {
      const double improvement = std::abs(best.value - checkpoint_value);
      if (improvement < eps / 10.0) {
        ++t;
        break;
      }
      checkpoint_value = best.value;
    }
  }
  best.iterations = t;
  return best;
}

StageOutcome enumerate_stage(const StageProblem& p, const std::vector<std::vector<double>>& slot,
                             bool minimize) {
  check(!slot.empty(), "stage: empty strategy-class slot");
  StageOutcome best;
  best.value = minimize ? kInfinity : -kInfinity;
  for (const auto& candidate : slot) {
    const InnerScan scan = minimize ? scan_rows(p, candidate) : scan_columns(p, candidate);
    const bool better = minimize ? scan.value < best.value : scan.value > best.value;
    if (better) {
      best.outer = candidate;
      best.value = scan.value;
      best.inner_index = scan.index;
    }
  }
  best.iterations = static_cast<long long>(slot.size());
  return best;
}

}  // namespace

namespace {

void finish_outcome(const StageProblem& p, bool minimize, StageOutcome& outcome) {
  const auto inner = minimize ? point_mass(outcome.inner_index, p.num_a)
                              : point_mass(outcome.inner_index, p.num_b);
  const auto& mu = minimize ? inner : outcome.outer;
  const auto& nu = minimize ? outcome.outer : inner;
  outcome.bonus = stage_bonus_2p(p.params, p.counts, p.num_a, p.num_b, mu, nu);
  outcome.uncertainty = uncertainty_2p(p.params, p.counts, p.num_a, p.num_b, mu, nu);
}

}  // namespace

double maximin_objective(const StageProblem& problem, std::span<const double> mu) {
  return scan_columns(problem, mu).value;
}

double minimax_objective(const StageProblem& problem, std::span<const double> nu) {
  return scan_rows(problem, nu).value;
}

StageOutcome maximin_stage(const StageProblem& problem,
                           const std::vector<std::vector<double>>* slot,
                           const OptimizerConfig& opt) {
  for (double q : problem.payoff) check(std::isfinite(q), "maximin_stage: non-finite payoff");
  StageOutcome outcome = slot != nullptr ? enumerate_stage(problem, *slot, /*minimize=*/false)
                                         : pgd_stage(problem, opt, /*minimize=*/false);
  finish_outcome(problem, /*minimize=*/false, outcome);
  return outcome;
}

StageOutcome minimax_stage(const StageProblem& problem,
                           const std::vector<std::vector<double>>* slot,
                           const OptimizerConfig& opt) {
  for (double q : problem.payoff) check(std::isfinite(q), "minimax_stage: non-finite payoff");
  StageOutcome outcome = slot != nullptr ? enumerate_stage(problem, *slot, /*minimize=*/true)
                                         : pgd_stage(problem, opt, /*minimize=*/true);
  finish_outcome(problem, /*minimize=*/true, outcome);
  return outcome;
}

SbmmReport solve_sbmm(const EmpiricalModel& model, const StrategyClass& strategy_class,
                      const BonusParams& params, const OptimizerConfig& opt) {
  const GameShape& sh = model.shape;
  check(sh.num_players == 2, "sbmm: model must come from a two-player game");
  const int num_a = sh.action_counts[0];
  const int num_b = sh.action_counts[1];
  const int horizon = sh.horizon;

  SbmmReport report;
  report.output = Strategy(sh);
  report.auxiliary = Strategy(sh);
  report.lower_values.assign(static_cast<std::size_t>(horizon) * sh.num_states, 0.0);
  report.upper_values.assign(static_cast<std::size_t>(horizon) * sh.num_states, 0.0);
  report.params = params;
  report.resolved_opt = opt;
  if (report.resolved_opt.eps_opt <= 0.0) {
    report.resolved_opt.eps_opt = 1.0 / std::sqrt(static_cast<double>(params.n));
  }

  const bool enumerate_slots = strategy_class.kind() != ClassKind::kFull;

  std::vector<double> lower_next(sh.num_states, 0.0);
  std::vector<double> upper_next(sh.num_states, 0.0);
  for (int h = horizon - 1; h >= 0; --h) {
    std::vector<double> lower_now(sh.num_states, 0.0);
    std::vector<double> upper_now(sh.num_states, 0.0);
    for (int s = 0; s < sh.num_states; ++s) {
      StageProblem lower_stage;
      lower_stage.num_a = num_a;
      lower_stage.num_b = num_b;
      lower_stage.params = params;
      const auto counts = model.count_block(h, s);
      lower_stage.counts.assign(counts.begin(), counts.end());
      StageProblem upper_stage = lower_stage;
      lower_stage.payoff.resize(static_cast<std::size_t>(num_a) * num_b);
      upper_stage.payoff.resize(static_cast<std::size_t>(num_a) * num_b);
      for (int ja = 0; ja < sh.joint_count(); ++ja) {
        double lower_q = model.reward(h, 0, s, ja);
        double upper_q = lower_q;
        const auto row = model.transition_row(h, s, ja);
        for (int next = 0; next < sh.num_states; ++next) {
          lower_q += row[next] * lower_next[next];
          upper_q += row[next] * upper_next[next];
        }
        if (!model.known(h, s, ja)) upper_q += params.horizon;  // compensation term
        lower_stage.payoff[ja] = lower_q;
        upper_stage.payoff[ja] = upper_q;
      }

      OptimizerConfig stage_opt = report.resolved_opt;
      stage_opt.seed = mix_seed(opt.seed, (static_cast<std::uint64_t>(h) << 20) | s);

      std::vector<std::vector<double>> max_slot, min_slot;
      if (enumerate_slots) {
        max_slot = strategy_class.slot(sh, h, s, 0);
        min_slot = strategy_class.slot(sh, h, s, 1);
      }
      const StageOutcome lower =
          maximin_stage(lower_stage, enumerate_slots ? &max_slot : nullptr, stage_opt);
      const StageOutcome upper =
          minimax_stage(upper_stage, enumerate_slots ? &min_slot : nullptr, stage_opt);

      const double clip_hi = static_cast<double>(horizon - h);
      lower_now[s] = clamp_to(lower.value, 0.0, clip_hi);
      upper_now[s] = clamp_to(upper.value, 0.0, clip_hi);
      report.lower_values[static_cast<std::size_t>(h) * sh.num_states + s] = lower_now[s];
      report.upper_values[static_cast<std::size_t>(h) * sh.num_states + s] = upper_now[s];

      std::copy(lower.outer.begin(), lower.outer.end(), report.output.dist(h, s, 0).begin());
      std::copy(upper.outer.begin(), upper.outer.end(), report.output.dist(h, s, 1).begin());
      report.auxiliary.set_point_mass(h, s, 0, upper.inner_index);
      report.auxiliary.set_point_mass(h, s, 1, lower.inner_index);

      SbmmStageDiagnostics diag;
      diag.h = h;
      diag.s = s;
      diag.lower_value = lower_now[s];
      diag.upper_value = upper_now[s];
      diag.maximin_value = lower.value;
      diag.minimax_value = upper.value;
      diag.maximin_iterations = lower.iterations;
      diag.minimax_iterations = upper.iterations;
      diag.bonus_lower = lower.bonus;
      diag.bonus_upper = upper.bonus;
      diag.uncertainty_lower = lower.uncertainty;
      diag.uncertainty_upper = upper.uncertainty;
      report.stages.push_back(diag);
    }
    lower_next = std::move(lower_now);
    upper_next = std::move(upper_now);
  }
  return report;
}

}  // namespace marl
