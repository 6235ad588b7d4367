// mixbound: generate mixing sequences, train stable learners, evaluate the
// phi- and beta-mixing stability bounds, and run Monte Carlo verification
// suites. Exit codes: 0 success, 2 validation error, 1 runtime error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mixbound/blocks.hpp"
#include "mixbound/bounds.hpp"
#include "mixbound/config.hpp"
#include "mixbound/experiments.hpp"
#include "mixbound/io.hpp"
#include "mixbound/svg.hpp"

namespace {

using namespace mixbound;

// Seed precedence: explicit flag, then config field, then MIXBOUND_SEED, then 1.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed,
                           const std::optional<std::uint64_t>& config_seed) {
  if (flag_seed) return *flag_seed;
  if (config_seed) return *config_seed;
  if (const char* env = std::getenv("MIXBOUND_SEED")) return std::strtoull(env, nullptr, 10);
  return 1;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  atomic_write_file(path, content);
}

MixingProfile profile_from_json(const json& doc, CoefficientType expected) {
  const std::string kind = doc.value("kind", "zero");
  if (kind == "zero") return MixingProfile::zero(expected);
  if (kind == "algebraic")
    return MixingProfile::algebraic(expected, doc.at("c0").get<double>(),
                                    doc.at("rate").get<double>());
  if (kind == "exponential")
    return MixingProfile::exponential(expected, doc.at("c0").get<double>(),
                                      doc.at("c1").get<double>(), doc.at("rate").get<double>());
  if (kind == "table")
    return MixingProfile::exact_table(expected, doc.at("values").get<std::vector<double>>());
  if (kind == "chain") {
    const MarkovChainModel chain = chain_from_json(doc);
    return profile_from_chain(chain, doc.value("k_max", 64L), expected);
  }
  throw std::invalid_argument("unknown profile kind: " + kind);
}

BoundReport evaluate_theorem(const std::string& theorem, const json& in, long m_override) {
  const long m = m_override > 0 ? m_override : in.value("m", 0L);
  std::optional<double> epsilon, delta;
  if (in.contains("epsilon")) epsilon = in.at("epsilon").get<double>();
  if (in.contains("delta")) delta = in.at("delta").get<double>();

  if (theorem == "phi-general") {
    PhiBoundInputs pin;
    pin.beta_hat = in.at("beta_hat").get<double>();
    pin.M = in.at("M").get<double>();
    pin.m = m;
    pin.profile = profile_from_json(in.value("profile", json::object()), CoefficientType::phi);
    pin.b = in.value("b", 0L);
    pin.epsilon = epsilon;
    pin.delta = delta;
    if (in.value("optimize_b", false))
      return phi_bound_best_b(pin.beta_hat, pin.M, pin.m, pin.profile, epsilon, delta);
    return phi_bound_general(pin);
  }
  if (theorem == "phi-algebraic") {
    return phi_bound_algebraic(in.at("beta_hat").get<double>(), in.at("M").get<double>(), m,
                               in.at("phi0").get<double>(), in.at("r").get<double>(), epsilon,
                               delta);
  }
  if (theorem == "corollary") {
    return corollary_bound(learner_kind_from(in.at("kind").get<std::string>()),
                           in.value("kappa", 1.0), in.at("lambda").get<double>(),
                           in.value("B", 1.0), in.value("M_internal", 0.0), m,
                           in.at("phi0").get<double>(), in.at("r").get<double>(),
                           in.at("delta").get<double>());
  }
  if (theorem == "beta") {
    BetaBoundInputs bin;
    bin.beta_hat = in.at("beta_hat").get<double>();
    bin.M = in.at("M").get<double>();
    bin.m = m;
    bin.profile = profile_from_json(in.value("profile", json::object()), CoefficientType::beta);
    if (in.value("optimize_blocks", false)) {
      // per-m scan over feasible (a, b, mu); delta direction only
      if (!delta)
        throw std::invalid_argument("optimize_blocks requires the delta direction");
      const auto best = beta_bound_best_blocks(bin.beta_hat, bin.M, m, bin.profile, *delta);
      if (!best)
        throw std::domain_error(
            "infeasible delta: no block triple satisfies delta' = delta - (mu - 1) "
            "beta(b) > 0 at this m");
      return *best;
    }
    bin.a = in.at("a").get<long>();
    bin.b = in.at("b").get<long>();
    bin.mu = in.at("mu").get<long>();
    bin.epsilon = epsilon;
    bin.delta = delta;
    return beta_bound(bin);
  }
  if (theorem == "beta-opt") {
    const BlockChoice choice = optimize_beta_blocks(in.at("beta_hat").get<double>(),
                                                    in.value("M", 1.0), m,
                                                    in.at("r").get<double>());
    BoundReport rep;
    rep.theorem = "beta-opt";
    rep.direction = "block-choice";
    rep.a = choice.a;
    rep.b = choice.b;
    rep.mu = choice.mu;
    rep.b_real = choice.b_real;
    rep.bound_value = choice.s_integer;
    rep.terms["mu_real"] = choice.mu_real;
    rep.terms["a_real"] = choice.a_real;
    rep.terms["s_real"] = choice.s_real;
    rep.terms["s_integer"] = choice.s_integer;
    rep.terms["gamma"] = choice.gamma;
    rep.terms["C_r"] = choice.c_r;
    return rep;
  }
  throw std::invalid_argument("unknown theorem: " + theorem);
}

std::string bound_sweep_csv(const std::string& theorem, const json& in,
                            const std::vector<long>& m_list) {
  std::vector<std::string> term_keys;
  std::string rows;
  for (long m : m_list) {
    const BoundReport rep = evaluate_theorem(theorem, in, m);
    if (term_keys.empty())
      for (const auto& [k, v] : rep.terms) term_keys.push_back(k);
    rows += std::to_string(m) + "," + std::to_string(rep.b) + "," + std::to_string(rep.mu) +
            "," + std::to_string(rep.a) + "," + fmt(rep.epsilon) + "," + fmt(rep.delta) + "," +
            fmt(rep.bound_value);
    for (const auto& k : term_keys) {
      const auto it = rep.terms.find(k);
      rows += ",";
      rows += it == rep.terms.end() ? "" : fmt(it->second);
    }
    rows += "\n";
  }
  std::string header = "m,b,mu,a,epsilon,delta,bound";
  for (const auto& k : term_keys) header += ",term_" + k;
  return header + "\n" + rows;
}

// Deterministic pseudo-random cost-like block function: a fixed hash of the
// block contents mapped to [0, bound].
BlockFunction hashed_block_function(std::uint64_t seed, double bound) {
  return [seed, bound](const std::vector<std::vector<int>>& blocks) {
    std::uint64_t h = seed;
    for (const auto& block : blocks)
      for (int s : block) {
        h ^= static_cast<std::uint64_t>(s) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h = splitmix64(h);
      }
    return bound * (static_cast<double>(h >> 11) * 0x1.0p-53);
  };
}

int run_generate(const std::string& chain_path, long m,
                 const std::optional<std::uint64_t>& seed_flag, const std::string& out) {
  const json doc = load_json_file(chain_path);
  const MarkovChainModel chain = chain_from_json(doc);
  const LabelingRule rule = rule_from_json(doc);
  std::optional<std::uint64_t> cfg_seed;
  if (doc.contains("seed")) cfg_seed = doc.at("seed").get<std::uint64_t>();
  const LabeledSequence seq = generate(chain, rule, m, resolve_seed(seed_flag, cfg_seed));
  emit(out, sequence_csv(seq));
  return 0;
}

int run_train(const std::string& config_path, long m_flag,
              const std::optional<std::uint64_t>& seed_flag, const std::string& out) {
  const json doc = load_json_file(config_path);
  ExperimentConfig cfg = experiment_from_json(doc);
  std::optional<std::uint64_t> cfg_seed;
  if (doc.contains("seed")) cfg_seed = doc.at("seed").get<std::uint64_t>();
  const std::uint64_t seed = resolve_seed(seed_flag, cfg_seed);
  const long m = m_flag > 0 ? m_flag : (cfg.m_list.empty() ? 100 : cfg.m_list.front());
  const LabeledSequence data = generate(cfg.chain, cfg.rule, m, seed);
  const TrainedModel model = train(cfg.learner, data);
  emit(out, dual_coefficients_csv(model));
  json info;
  info["kind"] = to_string(model.kind);
  info["m"] = m;
  info["objective"] = model.objective_value;
  info["converged"] = model.converged;
  info["kappa"] = model.kappa;
  info["empirical_risk"] = empirical_risk(model, data);
  std::cerr << info.dump(2) << "\n";
  return 0;
}

int run_stability(const std::string& config_path, long m_flag, long n_perturbations,
                  long probes, const std::optional<std::uint64_t>& seed_flag,
                  const std::string& out) {
  const json doc = load_json_file(config_path);
  ExperimentConfig cfg = experiment_from_json(doc);
  std::optional<std::uint64_t> cfg_seed;
  if (doc.contains("seed")) cfg_seed = doc.at("seed").get<std::uint64_t>();
  const std::uint64_t seed = resolve_seed(seed_flag, cfg_seed);
  const long m = m_flag > 0 ? m_flag : (cfg.m_list.empty() ? 100 : cfg.m_list.front());
  const LabeledSequence data = generate(cfg.chain, cfg.rule, m, seed);
  const double kappa = cfg.learner.kind == LearnerKind::EntropyMixture
                           ? 0.0
                           : cfg.learner.kernel.kappa_for(data.inputs);
  const StabilityCertificate cert = certify_stability(cfg.learner, m, kappa);
  const StabilityMeasurement meas = measure_stability(cfg.learner, data, cfg.chain, cfg.rule,
                                                      n_perturbations, probes, seed);
  json j;
  j["certificate"] = {{"kind", to_string(cert.kind)},
                      {"beta_hat", cert.beta_hat},
                      {"M", cert.M},
                      {"sigma", cert.sigma},
                      {"kappa", cert.kappa},
                      {"lambda", cert.lambda},
                      {"m", cert.m},
                      {"provenance", "formula"}};
  j["empirical"] = {{"max_deviation", meas.max_deviation},
                    {"n_perturbations", n_perturbations},
                    {"probe_points", probes},
                    {"provenance", "empirical"}};
  j["certificate_holds"] = meas.max_deviation <= cert.beta_hat + 1e-9;
  emit(out, j.dump(2) + "\n");
  return 0;
}

int run_blocks(long m, long a, long b, const std::string& chain_path,
               const std::optional<std::uint64_t>& seed_flag, const std::string& out) {
  const BlockPlan plan = partition(m, a, b);
  json j;
  j["m"] = plan.m;
  j["a"] = plan.a;
  j["b"] = plan.b;
  j["mu"] = plan.mu;
  j["k_star"] = plan.k_star();
  j["a_blocks"] = json::array();
  for (const auto& [lo, hi] : plan.a_ranges) j["a_blocks"].push_back({lo, hi});
  j["b_blocks"] = json::array();
  for (const auto& [lo, hi] : plan.b_ranges) j["b_blocks"].push_back({lo, hi});
  std::cout << j.dump(2) << "\n";
  if (!chain_path.empty()) {
    const MarkovChainModel chain = chain_from_json(load_json_file(chain_path));
    const auto blocks =
        sample_independent_blocks(chain, plan, resolve_seed(seed_flag, std::nullopt));
    std::string csv = "block,t,state\n";
    for (std::size_t i = 0; i < blocks.size(); ++i)
      for (std::size_t t = 0; t < blocks[i].size(); ++t)
        csv += std::to_string(i + 1) + "," + std::to_string(t + 1) + "," +
               std::to_string(blocks[i][t]) + "\n";
    emit(out, csv);
  }
  return 0;
}

int run_verify(const std::string& config_path, const std::optional<std::uint64_t>& seed_flag,
               const std::string& out) {
  const json doc = load_json_file(config_path);
  const MarkovChainModel chain = chain_from_json(doc.at("chain"));
  const long m = doc.value("m", 6L);
  const long a = doc.value("a", 2L);
  const long b = doc.value("b", 1L);
  const long n_random = doc.value("n_random", 8L);
  std::optional<std::uint64_t> cfg_seed;
  if (doc.contains("seed")) cfg_seed = doc.at("seed").get<std::uint64_t>();
  const std::uint64_t seed = resolve_seed(seed_flag, cfg_seed);

  const BlockPlan plan = partition(m, a, b);
  std::string csv = "function,e_dependent,e_independent,lhs,beta_k_star,rhs,holds\n";
  bool all_hold = true;
  for (long f = 0; f < n_random; ++f) {
    const double bound = 1.0;
    const YuLemmaCheck check =
        verify_yu_lemma(chain, plan, hashed_block_function(derive_seed(seed, 0xfced, f), bound),
                        bound);
    all_hold = all_hold && check.holds;
    csv += std::to_string(f) + "," + fmt(check.e_dependent) + "," + fmt(check.e_independent) +
           "," + fmt(check.lhs) + "," + fmt(check.beta_k_star) + "," + fmt(check.rhs) + "," +
           (check.holds ? "1" : "0") + "\n";
  }
  emit(out, csv);
  if (!all_hold) throw std::runtime_error("independent-block lemma violated (see CSV)");
  return 0;
}

int run_report(const std::string& config_path, const std::string& out_dir,
               const std::optional<std::uint64_t>& seed_flag, bool with_svg) {
  const json doc = load_json_file(config_path);
  ExperimentConfig cfg = experiment_from_json(doc);
  if (seed_flag) cfg.seed = *seed_flag;
  else if (!doc.contains("seed")) cfg.seed = resolve_seed(std::nullopt, std::nullopt);
  const SuiteResult suite = run_suite(cfg);
  const std::string base = out_dir.empty() ? "." : out_dir;
  atomic_write_file(base + "/trials.csv", trials_csv(suite, cfg.mode));
  atomic_write_file(base + "/summary.json", summary_to_json(suite).dump(2) + "\n");
  if (with_svg) {
    SvgSeries gap{"mean gap", "#1f77b4", {}, {}};
    SvgSeries bound{"bound", "#d62728", {}, {}};
    const double d0 = cfg.delta_list.front();
    for (const CellSummary& c : suite.cells) {
      if (c.delta != d0) continue;
      gap.x.push_back(static_cast<double>(c.m));
      gap.y.push_back(c.mean_gap);
      bound.x.push_back(static_cast<double>(c.m));
      bound.y.push_back(c.bound);
    }
    atomic_write_file(base + "/gap_vs_m.svg",
                      svg_loglog_plot({gap, bound}, "generalization gap vs m", "m", "value"));
  }
  std::cout << summary_to_json(suite).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mixbound: stability-based generalization bounds for stationary phi- and "
      "beta-mixing processes"};
  app.require_subcommand(1);
  app.fallthrough();  // --seed may follow the subcommand

  std::optional<std::uint64_t> seed_flag;
  app.add_option("--seed", seed_flag, "seed override (falls back to config, then MIXBOUND_SEED)");

  // generate
  auto* gen = app.add_subcommand("generate", "draw a stationary labeled sequence as CSV");
  std::string gen_chain, gen_out = "-";
  long gen_m = 100;
  gen->add_option("--chain", gen_chain, "chain spec JSON")->required();
  gen->add_option("--m", gen_m, "sequence length")->required();
  gen->add_option("--out", gen_out, "output CSV path (default stdout)");

  // train
  auto* tr = app.add_subcommand("train", "train a learner, export dual coefficients as CSV");
  std::string tr_config, tr_out = "-";
  long tr_m = 0;
  tr->add_option("--config", tr_config, "experiment config JSON")->required();
  tr->add_option("--m", tr_m, "sample size (default: first m_list entry)");
  tr->add_option("--out", tr_out, "output CSV path (default stdout)");

  // stability
  auto* st = app.add_subcommand("stability",
                                "certified stability constants and empirical estimate");
  std::string st_config, st_out = "-";
  long st_m = 0, st_pert = 50, st_probes = 64;
  st->add_option("--config", st_config, "experiment config JSON")->required();
  st->add_option("--m", st_m, "sample size (default: first m_list entry)");
  st->add_option("--perturbations", st_pert, "single-point replacements");
  st->add_option("--probes", st_probes, "probe inputs for the sup over z");
  st->add_option("--out", st_out, "output JSON path (default stdout)");

  // bound
  auto* bd = app.add_subcommand("bound", "evaluate a generalization bound");
  std::string bd_theorem, bd_json, bd_out = "-", bd_csv;
  bd->add_option("--theorem", bd_theorem,
                 "theorem evaluator: phi-general (explicit cutoff b), phi-algebraic "
                 "(optimal cutoff, r > 1), corollary (per-learner SVM/SVR/KRR/"
                 "entropy-mixture gap), beta (independent blocks), beta-opt (block "
                 "parameter optimizer)")
      ->required()
      ->check(CLI::IsMember({"phi-general", "phi-algebraic", "corollary", "beta", "beta-opt"}));
  bd->add_option("--json", bd_json, "inputs JSON path")->required();
  bd->add_option("--out", bd_out, "output JSON path (default stdout)");
  bd->add_option("--csv", bd_csv, "sweep mode: CSV path, inputs must carry m_list");

  // blocks
  auto* bl = app.add_subcommand("blocks", "block decomposition and independent block samples");
  std::string bl_chain, bl_out = "-";
  long bl_m = 0, bl_a = 0, bl_b = 0;
  bl->add_option("--m", bl_m, "sequence length")->required();
  bl->add_option("--a", bl_a, "kept block size")->required();
  bl->add_option("--b", bl_b, "discarded gap size")->required();
  bl->add_option("--chain", bl_chain, "chain spec JSON; if given, sample blocks");
  bl->add_option("--out", bl_out, "block sample CSV path (default stdout)");

  // verify
  auto* vf = app.add_subcommand("verify",
                                "exact independent-block lemma verification on a small chain");
  std::string vf_config, vf_out = "-";
  vf->add_option("--config", vf_config, "verification config JSON")->required();
  vf->add_option("--out", vf_out, "output CSV path (default stdout)");

  // report
  auto* rp = app.add_subcommand("report", "Monte Carlo suite: trials CSV + summary JSON");
  std::string rp_config, rp_dir = ".";
  bool rp_svg = false;
  rp->add_option("--config", rp_config, "experiment config JSON")->required();
  rp->add_option("--out-dir", rp_dir, "output directory");
  rp->add_flag("--svg", rp_svg, "also emit a log-log SVG plot");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return run_generate(gen_chain, gen_m, seed_flag, gen_out);
    if (tr->parsed()) return run_train(tr_config, tr_m, seed_flag, tr_out);
    if (st->parsed()) return run_stability(st_config, st_m, st_pert, st_probes, seed_flag, st_out);
    if (bd->parsed()) {
      const json inputs = load_json_file(bd_json);
      if (!bd_csv.empty()) {
        const auto m_list = inputs.at("m_list").get<std::vector<long>>();
        emit(bd_csv, bound_sweep_csv(bd_theorem, inputs, m_list));
        return 0;
      }
      const BoundReport rep = evaluate_theorem(bd_theorem, inputs, 0);
      emit(bd_out, report_to_json(rep).dump(2) + "\n");
      return 0;
    }
    if (bl->parsed()) return run_blocks(bl_m, bl_a, bl_b, bl_chain, seed_flag, bl_out);
    if (vf->parsed()) return run_verify(vf_config, seed_flag, vf_out);
    if (rp->parsed()) return run_report(rp_config, rp_dir, seed_flag, rp_svg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
