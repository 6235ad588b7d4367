#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mixbound/markov.hpp"
#include "mixbound/rng.hpp"

namespace mixbound {

// How hidden chain states become labeled points. Inputs are a fixed
// per-state embedding in R^d plus i.i.d. jitter; labels are either a
// per-state level plus bounded noise clipped to [0, B] (regression) or a
// per-state sign with i.i.d. flip noise (classification). Being a fixed
// measurable function of (state, independent noise), the labeled process
// stays stationary and mixes at least as fast as the chain.
struct LabelingRule {
  enum class Mode { Regression, Sign };

  Mode mode = Mode::Regression;
  std::vector<double> state_levels;          // f(state)
  std::vector<std::vector<double>> embeddings;  // x center per state
  double noise_sd = 0.05;                    // label noise (regression)
  double flip_probability = 0.0;             // label noise (sign mode)
  double jitter_sd = 0.05;                   // input jitter
  double output_bound = 1.0;                 // B, labels live in [0, B] (or {-B, B})

  static LabelingRule regression(std::vector<double> levels, int embed_dim, double B,
                                 double noise_sd = 0.05, double jitter_sd = 0.05) {
    LabelingRule r;
    r.mode = Mode::Regression;
    r.state_levels = std::move(levels);
    r.output_bound = B;
    r.noise_sd = noise_sd;
    r.jitter_sd = jitter_sd;
    r.embeddings = default_embeddings(static_cast<int>(r.state_levels.size()), embed_dim);
    return r;
  }

  static LabelingRule sign(std::vector<double> levels, int embed_dim,
                           double flip_probability = 0.0, double jitter_sd = 0.05) {
    LabelingRule r;
    r.mode = Mode::Sign;
    r.state_levels = std::move(levels);
    r.output_bound = 1.0;
    r.flip_probability = flip_probability;
    r.jitter_sd = jitter_sd;
    r.embeddings = default_embeddings(static_cast<int>(r.state_levels.size()), embed_dim);
    return r;
  }

  int dim() const { return embeddings.empty() ? 0 : static_cast<int>(embeddings[0].size()); }

  // One labeled point for a given state; consumes dim()+1 noise draws.
  std::pair<std::vector<double>, double> label(int state, Rng& rng) const {
    const std::size_t s = static_cast<std::size_t>(state);
    if (s >= state_levels.size()) throw std::invalid_argument("state out of range");
    std::vector<double> x = embeddings[s];
    for (auto& xi : x) xi += jitter_sd * rng.gaussian();
    double y;
    if (mode == Mode::Regression) {
      y = std::clamp(state_levels[s] + noise_sd * rng.gaussian(), 0.0, output_bound);
    } else {
      const double flip = rng.uniform() < flip_probability ? -1.0 : 1.0;
      y = (state_levels[s] >= 0.0 ? 1.0 : -1.0) * flip;
    }
    return {std::move(x), y};
  }

 private:
  static std::vector<std::vector<double>> default_embeddings(int n_states, int embed_dim) {
    if (embed_dim < 1) throw std::invalid_argument("embedding dimension must be >= 1");
    std::vector<std::vector<double>> e(static_cast<std::size_t>(n_states),
                                       std::vector<double>(static_cast<std::size_t>(embed_dim), 0.0));
    // states spread on a fixed deterministic grid so distinct states are separable
    for (int s = 0; s < n_states; ++s) {
      for (int d = 0; d < embed_dim; ++d) {
        const double phase = (s + 1.0) * (d + 1.0);
        e[static_cast<std::size_t>(s)][static_cast<std::size_t>(d)] =
            std::cos(phase) + (d == 0 ? static_cast<double>(s) : 0.0);
      }
    }
    return e;
  }
};

// A stationary sample S = (z_1..z_m): inputs, labels, the hidden state path
// and the final generator state needed to continue the chain past the sample.
struct LabeledSequence {
  std::vector<std::vector<double>> inputs;
  std::vector<double> labels;
  std::vector<int> hidden_states;
  int final_state = 0;
  double output_bound = 1.0;

  long size() const { return static_cast<long>(labels.size()); }
};

// Draw a stationary sample of length m: initial state from the stationary
// distribution, then transition steps; each point labeled with fresh noise.
inline LabeledSequence generate(const MarkovChainModel& model, const LabelingRule& rule,
                                long m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("generate needs m >= 1");
  if (static_cast<int>(rule.state_levels.size()) != model.n_states())
    throw std::invalid_argument("labeling rule does not match chain state count");
  Rng rng(seed);
  LabeledSequence s;
  s.output_bound = rule.output_bound;
  s.inputs.reserve(static_cast<std::size_t>(m));
  s.labels.reserve(static_cast<std::size_t>(m));
  s.hidden_states.reserve(static_cast<std::size_t>(m));
  int state = model.sample_stationary(rng);
  for (long t = 0; t < m; ++t) {
    if (t > 0) state = model.step(state, rng);
    auto [x, y] = rule.label(state, rng);
    s.inputs.push_back(std::move(x));
    s.labels.push_back(y);
    s.hidden_states.push_back(state);
  }
  s.final_state = state;
  return s;
}

// One labeled point `gap` steps past a given state (gap >= 1): the test draw
// of the dependent scenario, conditioned on the end of the training sample.
inline std::pair<std::vector<double>, double> continue_from(
    const MarkovChainModel& model, const LabelingRule& rule, int state, long gap, Rng& rng) {
  if (gap < 1) throw std::invalid_argument("continuation gap must be >= 1");
  for (long t = 0; t < gap; ++t) state = model.step(state, rng);
  return rule.label(state, rng);
}

// One labeled point from the stationary marginal (the independent scenario).
inline std::pair<std::vector<double>, double> stationary_draw(
    const MarkovChainModel& model, const LabelingRule& rule, Rng& rng) {
  return rule.label(model.sample_stationary(rng), rng);
}

}  // namespace mixbound
