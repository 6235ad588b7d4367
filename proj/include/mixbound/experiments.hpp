#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixbound/bounds.hpp"
#include "mixbound/learners.hpp"
#include "mixbound/markov.hpp"
#include "mixbound/sequence.hpp"

namespace mixbound {

enum class TestMode { Dependent, Independent };

enum class TheoremChoice { PhiGeneral, PhiAlgebraic, Beta };

inline std::string to_string(TestMode m) {
  return m == TestMode::Dependent ? "dependent" : "independent";
}

inline std::string to_string(TheoremChoice t) {
  switch (t) {
    case TheoremChoice::PhiGeneral: return "phi-general";
    case TheoremChoice::PhiAlgebraic: return "phi-algebraic";
    case TheoremChoice::Beta: return "beta";
  }
  return "?";
}

// One Monte Carlo verification run: which chain and learner, which sample
// sizes, how risk is estimated, and which bound is tested at which deltas.
struct ExperimentConfig {
  MarkovChainModel chain;
  LabelingRule rule;
  KernelLearnerSpec learner;
  std::vector<long> m_list;
  long n_trials = 100;
  TestMode mode = TestMode::Dependent;
  long test_gap = 1;    // Delta: steps past the sample for the dependent test draw
  long n_test = 200;    // continuation / fresh draws averaged per trial
  std::vector<double> delta_list{0.05};
  TheoremChoice theorem = TheoremChoice::PhiGeneral;
  double phi0 = 0.0;    // algebraic envelope, theorem = phi-algebraic
  double r = 2.0;
  // beta theorem: use the algebraic envelope c0 * b^-r instead of the chain's
  // exact table when c0 > 0 (rate studies against the paper's asymptotics)
  double beta_envelope_c0 = 0.0;
  std::uint64_t seed = 1;

  ExperimentConfig(MarkovChainModel c, LabelingRule lr, KernelLearnerSpec ls)
      : chain(std::move(c)), rule(std::move(lr)), learner(std::move(ls)) {}
};

struct TrialResult {
  long trial = 0;
  long m = 0;
  double r_hat = 0.0;
  double r_est = 0.0;
  double gap = 0.0;
  bool converged = true;
  // per requested delta; infinity marks an infeasible (no-guarantee) bound
  std::map<double, double> bound;
  std::map<double, bool> violated;
};

// Scan feasible integer block triples for the beta theorem at this delta and
// keep the smallest gap threshold. Returns nothing when no triple satisfies
// delta' > 0, i.e. the theorem gives no guarantee at this delta.
inline std::optional<BoundReport> beta_bound_best_blocks(double beta_hat, double M, long m,
                                                         const MixingProfile& profile,
                                                         double delta) {
  std::optional<BoundReport> best;
  for (long mu = 1; mu <= m; ++mu) {
    if (m % mu != 0) continue;
    const long len = m / mu;
    for (long b = 1; b <= len - 1; ++b) {
      BetaBoundInputs in{beta_hat, M, m, profile, len - b, b, mu, std::nullopt, delta};
      try {
        BoundReport rep = beta_bound(in);
        if (!best || rep.bound_value < best->bound_value) best = std::move(rep);
      } catch (const std::domain_error&) {
        // infeasible delta at this (a, b, mu); keep scanning
      }
    }
  }
  return best;
}

// epsilon(delta) for the configured theorem, certificate and chain profile.
// Trial-independent; run_suite computes it once per (m, delta) cell.
inline std::map<double, double> evaluate_bounds(const ExperimentConfig& cfg, long m) {
  const double kappa =
      cfg.learner.kind == LearnerKind::EntropyMixture ? 0.0 : cfg.learner.kernel.kappa_for({});
  const StabilityCertificate cert = certify_stability(cfg.learner, m, kappa);
  std::map<double, double> out;
  switch (cfg.theorem) {
    case TheoremChoice::PhiGeneral: {
      const MixingProfile profile = profile_from_chain(cfg.chain, m, CoefficientType::phi);
      for (double d : cfg.delta_list)
        out[d] = phi_bound_best_b(cert.beta_hat, cert.M, m, profile, std::nullopt, d)
                     .bound_value;
      break;
    }
    case TheoremChoice::PhiAlgebraic: {
      for (double d : cfg.delta_list)
        out[d] =
            phi_bound_algebraic(cert.beta_hat, cert.M, m, cfg.phi0, cfg.r, std::nullopt, d)
                .bound_value;
      break;
    }
    case TheoremChoice::Beta: {
      const MixingProfile profile =
          cfg.beta_envelope_c0 > 0.0
              ? MixingProfile::algebraic(CoefficientType::beta, cfg.beta_envelope_c0, cfg.r)
              : profile_from_chain(cfg.chain, m, CoefficientType::beta);
      for (double d : cfg.delta_list) {
        const auto best = beta_bound_best_blocks(cert.beta_hat, cert.M, m, profile, d);
        out[d] = best ? best->bound_value : std::numeric_limits<double>::infinity();
      }
      break;
    }
  }
  return out;
}

// generate -> train -> estimate risks -> compare against the bound.
// Dependent mode estimates R(h_S) = E[c(h_S, z) | S] by re-simulating the
// chain test_gap steps past the final training state; independent mode
// averages over fresh stationary draws.
inline TrialResult run_trial(const ExperimentConfig& cfg, long m, long trial_index,
                             const std::map<double, double>* precomputed_bounds = nullptr) {
  const std::uint64_t trial_seed =
      derive_seed(cfg.seed, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(trial_index));
  const LabeledSequence data = generate(cfg.chain, cfg.rule, m, trial_seed);
  const TrainedModel model = train(cfg.learner, data);

  TrialResult res;
  res.trial = trial_index;
  res.m = m;
  res.converged = model.converged;
  res.r_hat = empirical_risk(model, data);

  double acc = 0.0;
  for (long j = 0; j < cfg.n_test; ++j) {
    Rng rng(derive_seed(trial_seed, 0x7e57ed, static_cast<std::uint64_t>(j)));
    const auto [x, y] = cfg.mode == TestMode::Dependent
                            ? continue_from(cfg.chain, cfg.rule, data.final_state,
                                            cfg.test_gap, rng)
                            : stationary_draw(cfg.chain, cfg.rule, rng);
    acc += cost(model, x, y);
  }
  res.r_est = acc / static_cast<double>(cfg.n_test);
  res.gap = std::fabs(res.r_est - res.r_hat);

  const std::map<double, double> bounds =
      precomputed_bounds ? *precomputed_bounds : evaluate_bounds(cfg, m);
  for (const auto& [d, eps] : bounds) {
    res.bound[d] = eps;
    res.violated[d] = res.gap > eps;
  }
  return res;
}

struct CellSummary {
  long m = 0;
  double delta = 0.0;
  double mean_gap = 0.0;
  double max_gap = 0.0;
  double bound = 0.0;
  double violation_fraction = 0.0;
  long n_trials = 0;
  long n_nonconverged = 0;
};

struct SuiteResult {
  std::vector<TrialResult> trials;
  std::vector<CellSummary> cells;
  // least-squares slopes of log(mean gap) and log(bound) against log(m), per delta
  std::map<double, double> gap_slope;
  std::map<double, double> bound_slope;
};

inline SuiteResult run_suite(const ExperimentConfig& cfg) {
  if (cfg.n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
  if (cfg.m_list.empty()) throw std::invalid_argument("m_list must not be empty");
  SuiteResult suite;
  for (long m : cfg.m_list) {
    const std::map<double, double> bounds = evaluate_bounds(cfg, m);
    std::map<double, CellSummary> cells;
    for (double d : cfg.delta_list) {
      CellSummary c;
      c.m = m;
      c.delta = d;
      c.bound = bounds.at(d);
      cells[d] = c;
    }
    for (long t = 0; t < cfg.n_trials; ++t) {
      TrialResult res = run_trial(cfg, m, t, &bounds);
      for (double d : cfg.delta_list) {
        CellSummary& c = cells[d];
        c.mean_gap += res.gap;
        c.max_gap = std::max(c.max_gap, res.gap);
        c.violation_fraction += res.violated.at(d) ? 1.0 : 0.0;
        c.n_trials += 1;
        if (!res.converged) c.n_nonconverged += 1;
      }
      suite.trials.push_back(std::move(res));
    }
    for (double d : cfg.delta_list) {
      CellSummary& c = cells[d];
      c.mean_gap /= static_cast<double>(c.n_trials);
      c.violation_fraction /= static_cast<double>(c.n_trials);
      suite.cells.push_back(c);
    }
  }

  if (cfg.m_list.size() >= 2) {
    for (double d : cfg.delta_list) {
      std::vector<double> log_m, log_gap, log_bound;
      for (const CellSummary& c : suite.cells) {
        if (c.delta != d) continue;
        log_m.push_back(std::log(static_cast<double>(c.m)));
        log_gap.push_back(std::log(std::max(c.mean_gap, 1e-300)));
        if (std::isfinite(c.bound)) log_bound.push_back(std::log(c.bound));
      }
      suite.gap_slope[d] = fit_slope(log_m, log_gap);
      if (log_bound.size() == log_m.size()) suite.bound_slope[d] = fit_slope(log_m, log_bound);
    }
  }
  return suite;
}

}  // namespace mixbound
