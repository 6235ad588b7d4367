#include <doctest.h>

#include <cmath>
#include <vector>

#include "mixbound/config.hpp"
#include "mixbound/experiments.hpp"
#include "mixbound/io.hpp"

using namespace mixbound;

namespace {

ExperimentConfig krr_config() {
  ExperimentConfig cfg(MarkovChainModel::two_state(0.2, 0.4),
                       LabelingRule::regression({0.25, 0.75}, 2, 1.0, 0.05),
                       KernelLearnerSpec{});
  cfg.learner.kind = LearnerKind::KRR;
  cfg.learner.lambda = 1.0;
  cfg.learner.kernel = Kernel::rbf(1.0);
  return cfg;
}

}  // namespace

TEST_CASE("i.i.d. chains collapse the dependent and independent scenarios") {
  // identical rows: the continuation law equals the stationary law
  const MarkovChainModel iid = MarkovChainModel::from_rows({{0.6, 0.4}, {0.6, 0.4}});
  const LabelingRule rule = LabelingRule::regression({0.25, 0.75}, 2, 1.0, 0.05);
  KernelLearnerSpec spec;
  spec.kind = LearnerKind::KRR;
  spec.lambda = 1.0;
  spec.kernel = Kernel::rbf(1.0);
  const LabeledSequence data = generate(iid, rule, 60, 7);
  const TrainedModel model = train(spec, data);

  const long n = 4000;
  double dep_mean = 0.0, dep_sq = 0.0, ind_mean = 0.0, ind_sq = 0.0;
  for (long j = 0; j < n; ++j) {
    Rng r1(derive_seed(11, static_cast<std::uint64_t>(j)));
    Rng r2(derive_seed(12, static_cast<std::uint64_t>(j)));
    const auto zd = continue_from(iid, rule, data.final_state, 1, r1);
    const auto zi = stationary_draw(iid, rule, r2);
    const double cd = cost(model, zd.first, zd.second);
    const double ci = cost(model, zi.first, zi.second);
    dep_mean += cd;
    dep_sq += cd * cd;
    ind_mean += ci;
    ind_sq += ci * ci;
  }
  dep_mean /= n;
  ind_mean /= n;
  const double var_d = dep_sq / n - dep_mean * dep_mean;
  const double var_i = ind_sq / n - ind_mean * ind_mean;
  const double se = std::sqrt((var_d + var_i) / n);
  CHECK(std::fabs(dep_mean - ind_mean) <= 3.0 * se + 1e-12);
}

TEST_CASE("a learnable constant target drives the gap to zero with m") {
  ExperimentConfig cfg(MarkovChainModel::two_state(0.2, 0.4),
                       LabelingRule::regression({0.5, 0.5}, 2, 1.0, 0.0),
                       KernelLearnerSpec{});
  cfg.learner.kind = LearnerKind::KRR;
  cfg.learner.lambda = 1e-3;
  cfg.learner.kernel = Kernel::rbf(1.0);
  cfg.n_test = 400;
  cfg.seed = 3;
  const TrialResult small = run_trial(cfg, 25, 0);
  const TrialResult large = run_trial(cfg, 200, 0);
  CHECK(large.gap <= small.gap + 1e-9);
  CHECK(large.gap <= 1e-3);
}

TEST_CASE("suite summaries: violations within delta and reproducible bytes") {
  ExperimentConfig cfg = krr_config();
  cfg.m_list = {40, 80};
  cfg.n_trials = 40;
  cfg.delta_list = {0.1};
  cfg.n_test = 100;
  cfg.seed = 21;
  const SuiteResult a = run_suite(cfg);
  const SuiteResult b = run_suite(cfg);
  CHECK(trials_csv(a, cfg.mode) == trials_csv(b, cfg.mode));
  for (const CellSummary& c : a.cells) {
    CHECK(c.violation_fraction <= c.delta);
    CHECK(c.n_trials == 40);
  }
  // the bound column reproduces the bound engine bit for bit
  const std::map<double, double> direct = evaluate_bounds(cfg, 40);
  bool seen = false;
  for (const TrialResult& t : a.trials) {
    if (t.m != 40) continue;
    CHECK(fmt(t.bound.at(0.1)) == fmt(direct.at(0.1)));
    seen = true;
    break;
  }
  CHECK(seen);
}

TEST_CASE("mean gap does not grow with the sample size") {
  ExperimentConfig cfg = krr_config();
  cfg.m_list = {25, 50, 100, 200};
  cfg.n_trials = 30;
  cfg.delta_list = {0.1};
  cfg.n_test = 150;
  cfg.seed = 9;
  const SuiteResult suite = run_suite(cfg);
  // standard error of each mean gap from the per-trial gaps
  std::map<long, std::pair<double, double>> stats;  // m -> (mean, se)
  for (long m : cfg.m_list) {
    std::vector<double> gaps;
    for (const TrialResult& t : suite.trials)
      if (t.m == m) gaps.push_back(t.gap);
    double mean = 0.0;
    for (double g : gaps) mean += g;
    mean /= static_cast<double>(gaps.size());
    double var = 0.0;
    for (double g : gaps) var += (g - mean) * (g - mean);
    var /= static_cast<double>(gaps.size() - 1);
    stats[m] = {mean, std::sqrt(var / static_cast<double>(gaps.size()))};
  }
  for (std::size_t i = 1; i < cfg.m_list.size(); ++i) {
    const auto [prev_mean, prev_se] = stats[cfg.m_list[i - 1]];
    const auto [cur_mean, cur_se] = stats[cfg.m_list[i]];
    CHECK(cur_mean <= prev_mean + 2.0 * std::sqrt(prev_se * prev_se + cur_se * cur_se));
  }
}

TEST_CASE("a wide test gap approaches the independent scenario") {
  const MarkovChainModel chain = MarkovChainModel::two_state(0.2, 0.4);
  const LabelingRule rule = LabelingRule::regression({0.25, 0.75}, 2, 1.0, 0.05);
  KernelLearnerSpec spec;
  spec.kind = LearnerKind::KRR;
  spec.lambda = 1.0;
  spec.kernel = Kernel::rbf(1.0);
  const LabeledSequence data = generate(chain, rule, 60, 19);
  const TrainedModel model = train(spec, data);
  const StabilityCertificate cert = certify_stability(spec, 60, 1.0);

  const long gap_steps = 20;
  const long n = 4000;
  double dep = 0.0, dep_sq = 0.0, ind = 0.0, ind_sq = 0.0;
  for (long j = 0; j < n; ++j) {
    Rng r1(derive_seed(31, static_cast<std::uint64_t>(j)));
    Rng r2(derive_seed(32, static_cast<std::uint64_t>(j)));
    const auto zd = continue_from(chain, rule, data.final_state, gap_steps, r1);
    const auto zi = stationary_draw(chain, rule, r2);
    const double cd = cost(model, zd.first, zd.second);
    const double ci = cost(model, zi.first, zi.second);
    dep += cd;
    dep_sq += cd * cd;
    ind += ci;
    ind_sq += ci * ci;
  }
  dep /= n;
  ind /= n;
  const double se =
      std::sqrt(((dep_sq / n - dep * dep) + (ind_sq / n - ind * ind)) / n);
  const double phi_gap = exact_phi(chain, gap_steps);
  CHECK(std::fabs(dep - ind) <= cert.M * phi_gap + 3.0 * se + 1e-12);
}

TEST_CASE("solver non-convergence is flagged and propagates to the trial") {
  ExperimentConfig cfg = krr_config();
  cfg.learner.kind = LearnerKind::SVR;
  cfg.learner.solver_sweep_cap = 1;  // starve the solver
  cfg.n_test = 20;
  const TrialResult res = run_trial(cfg, 60, 0);
  CHECK_FALSE(res.converged);

  cfg.learner.solver_sweep_cap = 100000;
  const TrialResult ok = run_trial(cfg, 60, 0);
  CHECK(ok.converged);
}

TEST_CASE("entropy mixture runs through the experiment pipeline") {
  const json doc = json::parse(R"({
    "chain": {"transition": [[0.8, 0.2], [0.4, 0.6]],
              "labels": [0.25, 0.75], "noise_sd": 0.05, "B": 1.0},
    "learner": {"kind": "entropy-mixture", "lambda": 0.5, "n_theta": 17},
    "m_list": [40],
    "n_trials": 5,
    "n_test": 50,
    "delta_list": [0.1],
    "theorem": "phi-general",
    "seed": 13
  })");
  const ExperimentConfig cfg = experiment_from_json(doc);
  const SuiteResult suite = run_suite(cfg);
  const StabilityCertificate cert = certify_stability(cfg.learner, 40);
  for (const TrialResult& t : suite.trials) {
    CHECK(t.r_hat >= 0.0);
    CHECK(t.r_hat <= cert.M);
    CHECK(t.r_est >= 0.0);
    CHECK(t.r_est <= cert.M);
    CHECK_FALSE(t.violated.at(0.1));
  }
}

TEST_CASE("config documents round-trip into experiment configs") {
  const json doc = json::parse(R"({
    "chain": {"transition": [[0.8, 0.2], [0.4, 0.6]],
              "labels": [0.25, 0.75], "noise_sd": 0.05, "B": 1.0},
    "learner": {"kind": "krr", "lambda": 0.5, "kernel": {"type": "rbf", "gamma": 1.0}},
    "m_list": [50, 100],
    "n_trials": 5,
    "test_mode": "independent",
    "delta_list": [0.05, 0.1],
    "theorem": "phi-general",
    "seed": 77
  })");
  const ExperimentConfig cfg = experiment_from_json(doc);
  CHECK(cfg.chain.n_states() == 2);
  CHECK(cfg.learner.lambda == 0.5);
  CHECK(cfg.mode == TestMode::Independent);
  CHECK(cfg.m_list == std::vector<long>{50, 100});
  CHECK(cfg.seed == 77);

  json bad = doc;
  bad["learner"]["kind"] = "unknown";
  CHECK_THROWS_AS(experiment_from_json(bad), std::invalid_argument);
}

TEST_CASE("suite bound column under algebraic beta-mixing follows the -1/12 rate") {
  // certificate beta_hat = 4 kappa^2 B^2/(lambda m) scales as 1/m (alpha = 1);
  // with the algebraic envelope beta(b) = b^-2 the optimized bound decays as
  // m^(1/(2(r+1)) - 1/4) = m^(-1/12). The bound column is trial-independent,
  // so the slope is fitted on the suite's bound evaluator directly.
  ExperimentConfig cfg = krr_config();
  cfg.theorem = TheoremChoice::Beta;
  cfg.beta_envelope_c0 = 1.0;
  cfg.r = 2.0;
  cfg.delta_list = {0.5};
  std::vector<double> log_m, log_bound;
  for (long m : {720L, 1440L, 2880L, 5760L, 11520L, 23040L}) {
    log_m.push_back(std::log(static_cast<double>(m)));
    log_bound.push_back(std::log(evaluate_bounds(cfg, m).at(0.5)));
  }
  CHECK(std::fabs(fit_slope(log_m, log_bound) - (-1.0 / 12.0)) <= 0.05);
}

TEST_CASE("beta-theorem experiments stay feasible via the single-block fallback") {
  // mu = 1 has zero mixing penalty, so some triple is always feasible: tiny
  // deltas cost a (finite) blowup of the bound instead of an error
  ExperimentConfig cfg = krr_config();
  cfg.theorem = TheoremChoice::Beta;
  cfg.m_list = {60};
  cfg.delta_list = {1e-9, 0.5};
  const std::map<double, double> bounds = evaluate_bounds(cfg, 60);
  CHECK(std::isfinite(bounds.at(1e-9)));
  CHECK(std::isfinite(bounds.at(0.5)));
  CHECK(bounds.at(1e-9) > bounds.at(0.5));
}
