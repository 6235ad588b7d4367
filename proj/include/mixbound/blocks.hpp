#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mixbound/markov.hpp"
#include "mixbound/rng.hpp"

namespace mixbound {

// Block decomposition of indices 1..m into mu alternating runs of a points
// (the kept blocks) and b points (the discarded gaps):
//   block i covers (i-1)(a+b)+1 .. (i-1)(a+b)+a, followed by its b-point gap.
// The time distance between the end of one kept block and the start of the
// next is k_i = b + 1, so the dependence penalty is beta(k*) with k* = b + 1.
struct BlockPlan {
  long m = 0;
  long a = 0;
  long b = 0;
  long mu = 0;
  std::vector<std::pair<long, long>> a_ranges;  // 1-based inclusive
  std::vector<std::pair<long, long>> b_ranges;

  long k_star() const { return b + 1; }
};

inline BlockPlan partition(long m, long a, long b) {
  if (m < 1 || a < 1 || b < 1) throw std::invalid_argument("partition needs m, a, b >= 1");
  if (m % (a + b) != 0) {
    // suggest the closest feasible pair with the same gap width
    long best_a = -1;
    for (long d = 2; d <= m; ++d) {
      if (m % d == 0 && d > b) {
        const long cand = d - b;
        if (best_a < 0 || std::labs(cand - a) < std::labs(best_a - a)) best_a = cand;
      }
    }
    std::string hint = best_a > 0 ? " nearest feasible: a=" + std::to_string(best_a) +
                                        ", b=" + std::to_string(b)
                                  : "";
    throw std::invalid_argument("(a + b) = " + std::to_string(a + b) + " does not divide m = " +
                                std::to_string(m) + ";" + hint);
  }
  BlockPlan plan;
  plan.m = m;
  plan.a = a;
  plan.b = b;
  plan.mu = m / (a + b);
  for (long i = 0; i < plan.mu; ++i) {
    const long start = i * (a + b) + 1;
    plan.a_ranges.emplace_back(start, start + a - 1);
    plan.b_ranges.emplace_back(start + a, start + a + b - 1);
  }
  return plan;
}

// mu blocks of a consecutive states each, drawn independently of each other,
// each from the stationary chain law (the law any single within-block window
// of the dependent sequence has).
inline std::vector<std::vector<int>> sample_independent_blocks(const MarkovChainModel& model,
                                                               const BlockPlan& plan,
                                                               std::uint64_t seed) {
  std::vector<std::vector<int>> blocks;
  blocks.reserve(static_cast<std::size_t>(plan.mu));
  for (long i = 0; i < plan.mu; ++i) {
    Rng rng(derive_seed(seed, 0xb10c, static_cast<std::uint64_t>(i)));
    std::vector<int> block;
    block.reserve(static_cast<std::size_t>(plan.a));
    int state = model.sample_stationary(rng);
    for (long t = 0; t < plan.a; ++t) {
      if (t > 0) state = model.step(state, rng);
      block.push_back(state);
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

// Cost-like function of the kept blocks, with values in [0, bound]. This is
// the range every application of the independent-block lemma uses (costs and
// event indicators); the (mu - 1) M beta(k*) penalty is tight for it. A
// sign-valued function of range [-M, M] can deviate by up to twice that.
using BlockFunction = std::function<double(const std::vector<std::vector<int>>&)>;

namespace detail {

inline void check_enumerable(const MarkovChainModel& model, long m) {
  const double count = std::pow(static_cast<double>(model.n_states()), static_cast<double>(m));
  if (count > 1e6 + 0.5)
    throw std::invalid_argument("state space too large for exact enumeration (n^m > 1e6)");
}

// Visit every state sequence of the given length with its probability under
// the stationary chain law.
template <typename Visitor>
void enumerate_chain_sequences(const MarkovChainModel& model, long length, Visitor&& visit) {
  const int n = model.n_states();
  std::vector<int> seq(static_cast<std::size_t>(length), 0);
  std::vector<double> prefix(static_cast<std::size_t>(length) + 1, 1.0);
  long t = 0;
  seq[0] = -1;
  while (t >= 0) {
    if (++seq[static_cast<std::size_t>(t)] >= n) {
      --t;
      continue;
    }
    const int s = seq[static_cast<std::size_t>(t)];
    const double step_p =
        t == 0 ? model.stationary()[static_cast<std::size_t>(s)]
               : model.transition()(static_cast<std::size_t>(seq[static_cast<std::size_t>(t - 1)]),
                                    static_cast<std::size_t>(s));
    prefix[static_cast<std::size_t>(t) + 1] = prefix[static_cast<std::size_t>(t)] * step_p;
    if (t + 1 == length) {
      if (prefix[static_cast<std::size_t>(length)] > 0.0)
        visit(seq, prefix[static_cast<std::size_t>(length)]);
    } else {
      ++t;
      seq[static_cast<std::size_t>(t)] = -1;
    }
  }
}

inline std::vector<std::vector<int>> extract_blocks(const std::vector<int>& seq,
                                                    const BlockPlan& plan) {
  std::vector<std::vector<int>> blocks(static_cast<std::size_t>(plan.mu));
  for (long i = 0; i < plan.mu; ++i) {
    const auto [lo, hi] = plan.a_ranges[static_cast<std::size_t>(i)];
    auto& block = blocks[static_cast<std::size_t>(i)];
    block.reserve(static_cast<std::size_t>(plan.a));
    for (long t = lo; t <= hi; ++t) block.push_back(seq[static_cast<std::size_t>(t - 1)]);
  }
  return blocks;
}

}  // namespace detail

struct YuLemmaCheck {
  double e_dependent = 0.0;    // E_Q[h], exact under the chain law
  double e_independent = 0.0;  // E_P[h], exact under independent blocks
  double lhs = 0.0;            // |E_Q[h] - E_P[h]|
  double beta_k_star = 0.0;
  double rhs = 0.0;            // (mu - 1) M beta(k*)
  bool holds = false;
};

// Exact verification of the independent-block lemma
//   |E_Q[h] - E_P[h]| <= (mu - 1) M beta(k*)
// for h with values in [0, h_bound], by enumerating every length-m state
// sequence under the dependent law and every block tuple under the
// independent law. Only valid for chains small enough that n^m <= 1e6.
inline YuLemmaCheck verify_yu_lemma(const MarkovChainModel& model, const BlockPlan& plan,
                                    const BlockFunction& h, double h_bound) {
  if (h_bound < 0.0) throw std::invalid_argument("block function bound must be >= 0");
  detail::check_enumerable(model, plan.m);

  YuLemmaCheck check;
  detail::enumerate_chain_sequences(model, plan.m, [&](const std::vector<int>& seq, double p) {
    check.e_dependent += p * h(detail::extract_blocks(seq, plan));
  });

  // independent tuple enumeration: mu blocks, each a stationary a-window
  std::vector<std::vector<int>> block_atoms;
  std::vector<double> block_probs;
  detail::enumerate_chain_sequences(model, plan.a, [&](const std::vector<int>& seq, double p) {
    block_atoms.push_back(seq);
    block_probs.push_back(p);
  });
  const std::size_t n_atoms = block_atoms.size();
  std::vector<std::size_t> pick(static_cast<std::size_t>(plan.mu), 0);
  std::vector<std::vector<int>> tuple(static_cast<std::size_t>(plan.mu));
  for (;;) {
    double p = 1.0;
    for (long i = 0; i < plan.mu; ++i) {
      tuple[static_cast<std::size_t>(i)] = block_atoms[pick[static_cast<std::size_t>(i)]];
      p *= block_probs[pick[static_cast<std::size_t>(i)]];
    }
    check.e_independent += p * h(tuple);
    long carry = plan.mu - 1;
    while (carry >= 0 && ++pick[static_cast<std::size_t>(carry)] == n_atoms) {
      pick[static_cast<std::size_t>(carry)] = 0;
      --carry;
    }
    if (carry < 0) break;
  }

  check.lhs = std::fabs(check.e_dependent - check.e_independent);
  check.beta_k_star = exact_beta(model, plan.k_star());
  check.rhs = static_cast<double>(plan.mu - 1) * h_bound * check.beta_k_star;
  check.holds = check.lhs <= check.rhs + 1e-12;
  return check;
}

// Exact total variation between the dependent sequence's marginal on kept
// block i and the law of an independently sampled block. The lemma premises
// these are equal; by stationarity of the chain they are, and this verifies
// it to enumeration precision.
inline double block_marginal_tv(const MarkovChainModel& model, const BlockPlan& plan,
                                long block_index) {
  if (block_index < 0 || block_index >= plan.mu)
    throw std::invalid_argument("block index out of range");
  detail::check_enumerable(model, plan.m);
  const auto [lo, hi] = plan.a_ranges[static_cast<std::size_t>(block_index)];
  const long n = model.n_states();

  auto window_code = [&](const std::vector<int>& seq, long from, long to) {
    std::size_t code = 0;
    for (long t = from; t <= to; ++t)
      code = code * static_cast<std::size_t>(n) + static_cast<std::size_t>(seq[static_cast<std::size_t>(t - 1)]);
    return code;
  };

  std::size_t n_atoms = 1;
  for (long t = 0; t < plan.a; ++t) n_atoms *= static_cast<std::size_t>(n);
  std::vector<double> dependent(n_atoms, 0.0), independent(n_atoms, 0.0);

  detail::enumerate_chain_sequences(model, plan.m, [&](const std::vector<int>& seq, double p) {
    dependent[window_code(seq, lo, hi)] += p;
  });
  detail::enumerate_chain_sequences(model, plan.a, [&](const std::vector<int>& seq, double p) {
    independent[window_code(seq, 1, plan.a)] += p;
  });

  double tv = 0.0;
  for (std::size_t i = 0; i < n_atoms; ++i) tv += std::fabs(dependent[i] - independent[i]);
  return 0.5 * tv;
}

}  // namespace mixbound
