#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mixbound/experiments.hpp"
#include "mixbound/io.hpp"

namespace mixbound {

using nlohmann::json;

// Chain spec document:
//   {"transition": [[...]], "labels": [...], "noise_sd": f, "B": f}
// plus optional "mode" ("regression" | "sign"), "jitter_sd", "embed_dim",
// "flip_probability".
inline MarkovChainModel chain_from_json(const json& doc) {
  if (!doc.contains("transition")) throw std::invalid_argument("chain spec needs 'transition'");
  return MarkovChainModel::from_rows(doc.at("transition").get<std::vector<std::vector<double>>>());
}

inline LabelingRule rule_from_json(const json& doc) {
  std::vector<double> labels = doc.contains("labels")
                                   ? doc.at("labels").get<std::vector<double>>()
                                   : std::vector<double>{};
  if (labels.empty()) throw std::invalid_argument("chain spec needs 'labels' per state");
  const int embed_dim = doc.value("embed_dim", 2);
  const std::string mode = doc.value("mode", "regression");
  if (mode == "sign")
    return LabelingRule::sign(labels, embed_dim, doc.value("flip_probability", 0.0),
                              doc.value("jitter_sd", 0.05));
  if (mode != "regression") throw std::invalid_argument("unknown labeling mode: " + mode);
  return LabelingRule::regression(labels, embed_dim, doc.value("B", 1.0),
                                  doc.value("noise_sd", 0.05), doc.value("jitter_sd", 0.05));
}

inline Kernel kernel_from_json(const json& doc) {
  const std::string type = doc.value("type", "rbf");
  if (type == "rbf") return Kernel::rbf(doc.value("gamma", 1.0));
  if (type == "linear") return Kernel::linear(doc.value("kappa", 0.0));
  if (type == "polynomial")
    return Kernel::polynomial(doc.value("degree", 2), doc.value("coef0", 1.0),
                              doc.value("kappa", 0.0));
  throw std::invalid_argument("unknown kernel type: " + type);
}

inline KernelLearnerSpec learner_from_json(const json& doc) {
  KernelLearnerSpec spec;
  spec.kind = learner_kind_from(doc.value("kind", "krr"));
  spec.lambda = doc.value("lambda", 1.0);
  if (doc.contains("kernel")) spec.kernel = kernel_from_json(doc.at("kernel"));
  spec.epsilon_tube = doc.value("epsilon_tube", 0.1);
  spec.B = doc.value("B", 1.0);
  spec.n_theta = doc.value("n_theta", 33);
  spec.entropy_M = doc.value("entropy_M", 0.0);
  spec.solver_sweep_cap = doc.value("solver_sweep_cap", 100000L);
  spec.validate();
  return spec;
}

// Full experiment document: {"chain": {...}, "learner": {...}, "m_list": [...],
// "n_trials": n, "test_mode": "dependent"|"independent", "test_gap": n,
// "n_test": n, "delta_list": [...], "theorem": "...", "phi0": f, "r": f,
// "seed": n}.
inline ExperimentConfig experiment_from_json(const json& doc) {
  if (!doc.contains("chain")) throw std::invalid_argument("experiment config needs 'chain'");
  if (!doc.contains("learner")) throw std::invalid_argument("experiment config needs 'learner'");
  ExperimentConfig cfg(chain_from_json(doc.at("chain")), rule_from_json(doc.at("chain")),
                       learner_from_json(doc.at("learner")));
  cfg.m_list = doc.value("m_list", std::vector<long>{100});
  cfg.n_trials = doc.value("n_trials", 100L);
  const std::string mode = doc.value("test_mode", "dependent");
  if (mode == "dependent") cfg.mode = TestMode::Dependent;
  else if (mode == "independent") cfg.mode = TestMode::Independent;
  else throw std::invalid_argument("unknown test_mode: " + mode);
  cfg.test_gap = doc.value("test_gap", 1L);
  cfg.n_test = doc.value("n_test", 200L);
  cfg.delta_list = doc.value("delta_list", std::vector<double>{0.05});
  const std::string theorem = doc.value("theorem", "phi-general");
  if (theorem == "phi-general") cfg.theorem = TheoremChoice::PhiGeneral;
  else if (theorem == "phi-algebraic") cfg.theorem = TheoremChoice::PhiAlgebraic;
  else if (theorem == "beta") cfg.theorem = TheoremChoice::Beta;
  else throw std::invalid_argument("unknown theorem for experiments: " + theorem);
  cfg.phi0 = doc.value("phi0", 0.0);
  cfg.r = doc.value("r", 2.0);
  cfg.beta_envelope_c0 = doc.value("beta_envelope_c0", 0.0);
  cfg.seed = doc.value("seed", 1ULL);
  if (static_cast<int>(cfg.rule.state_levels.size()) != cfg.chain.n_states())
    throw std::invalid_argument("labels length must match the number of chain states");
  return cfg;
}

inline json load_json_file(const std::string& path) {
  return json::parse(read_file(path));
}

inline json report_to_json(const BoundReport& r) {
  json j;
  j["theorem"] = r.theorem;
  j["direction"] = r.direction;
  j["bound_value"] = r.bound_value;
  j["is_probability"] = r.is_probability;
  j["vacuous"] = r.vacuous;
  if (r.epsilon > 0.0 || r.direction == "delta-of-epsilon") j["epsilon"] = r.epsilon;
  if (r.delta > 0.0) j["delta"] = r.delta;
  json params;
  if (r.b_real > 0.0) params["b_real"] = r.b_real;
  params["b"] = r.b;
  if (r.mu > 0) {
    params["a"] = r.a;
    params["mu"] = r.mu;
  }
  j["chosen_parameters"] = params;
  j["terms"] = json::object();
  for (const auto& [k, v] : r.terms) j["terms"][k] = v;
  return j;
}

inline json summary_to_json(const SuiteResult& suite) {
  json j;
  j["cells"] = json::array();
  for (const CellSummary& c : suite.cells) {
    json cell;
    cell["m"] = c.m;
    cell["delta"] = c.delta;
    cell["mean_gap"] = c.mean_gap;
    cell["max_gap"] = c.max_gap;
    cell["bound"] = std::isfinite(c.bound) ? json(c.bound) : json("infeasible");
    cell["violation_fraction"] = c.violation_fraction;
    cell["n_trials"] = c.n_trials;
    cell["n_nonconverged"] = c.n_nonconverged;
    j["cells"].push_back(cell);
  }
  j["gap_slope"] = json::object();
  j["bound_slope"] = json::object();
  for (const auto& [d, s] : suite.gap_slope) j["gap_slope"][fmt(d)] = s;
  for (const auto& [d, s] : suite.bound_slope) j["bound_slope"][fmt(d)] = s;
  return j;
}

}  // namespace mixbound
