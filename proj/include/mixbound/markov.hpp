#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixbound/linalg.hpp"
#include "mixbound/mixing.hpp"
#include "mixbound/rng.hpp"

namespace mixbound {

// Finite-state ergodic Markov chain. Construction validates that the
// transition matrix is row stochastic and that the chain is irreducible and
// aperiodic, then solves for the stationary distribution. Started from the
// stationary distribution the chain realizes a stationary sequence, which is
// the data-generating process everything else builds on.
class MarkovChainModel {
 public:
  explicit MarkovChainModel(Matrix transition) : transition_(std::move(transition)) {
    validate_stochastic();
    validate_ergodic();
    compute_stationary();
  }

  static MarkovChainModel from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    Matrix t(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != n) throw std::invalid_argument("transition matrix not square");
      for (std::size_t j = 0; j < n; ++j) t(i, j) = rows[i][j];
    }
    return MarkovChainModel(std::move(t));
  }

  // Two-state chain with rows (1-p, p) and (q, 1-q).
  static MarkovChainModel two_state(double p, double q) {
    return from_rows({{1.0 - p, p}, {q, 1.0 - q}});
  }

  int n_states() const { return static_cast<int>(transition_.rows); }
  const Matrix& transition() const { return transition_; }
  const std::vector<double>& stationary() const { return stationary_; }

  int sample_stationary(Rng& rng) const { return rng.discrete(stationary_); }

  int step(int state, Rng& rng) const {
    const std::size_t n = transition_.rows;
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      acc += transition_(static_cast<std::size_t>(state), j);
      if (u < acc) return static_cast<int>(j);
    }
    return static_cast<int>(n) - 1;
  }

 private:
  void validate_stochastic() const {
    const std::size_t n = transition_.rows;
    if (n == 0 || transition_.cols != n)
      throw std::invalid_argument("transition matrix must be square and non-empty");
    for (std::size_t i = 0; i < n; ++i) {
      double row_sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p = transition_(i, j);
        if (!(p >= 0.0 && p <= 1.0 + 1e-12))
          throw std::invalid_argument("transition probability outside [0,1]");
        row_sum += p;
      }
      if (std::fabs(row_sum - 1.0) > 1e-12)
        throw std::invalid_argument("transition row " + std::to_string(i) +
                                    " does not sum to 1");
    }
  }

  // Irreducibility: strong connectivity of the positive-entry graph.
  // Aperiodicity: gcd over edges (u,v) of level[u] + 1 - level[v] equals 1,
  // with levels from a BFS over the strongly connected graph.
  void validate_ergodic() const {
    const std::size_t n = transition_.rows;
    auto reachable = [&](bool forward) {
      std::vector<char> seen(n, 0);
      std::vector<std::size_t> stack{0};
      seen[0] = 1;
      while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v = 0; v < n; ++v) {
          const double p = forward ? transition_(u, v) : transition_(v, u);
          if (p > 0.0 && !seen[v]) {
            seen[v] = 1;
            stack.push_back(v);
          }
        }
      }
      return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    };
    if (!reachable(true) || !reachable(false))
      throw std::invalid_argument("chain is not irreducible");

    std::vector<long> level(n, -1);
    std::vector<std::size_t> queue{0};
    level[0] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const std::size_t u = queue[qi];
      for (std::size_t v = 0; v < n; ++v) {
        if (transition_(u, v) > 0.0 && level[v] < 0) {
          level[v] = level[u] + 1;
          queue.push_back(v);
        }
      }
    }
    long period = 0;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        if (transition_(u, v) > 0.0)
          period = std::gcd(period, std::labs(level[u] + 1 - level[v]));
    if (period != 1) throw std::invalid_argument("chain is not aperiodic");
  }

  void compute_stationary() {
    const std::size_t n = transition_.rows;
    // (P^T - I) pi = 0 with the first equation replaced by sum(pi) = 1
    Matrix a(n, n);
    std::vector<double> b(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) a(0, j) = 1.0;
    b[0] = 1.0;
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        a(i, j) = transition_(j, i) - (i == j ? 1.0 : 0.0);
    stationary_ = solve_linear(std::move(a), std::move(b));
    double fixed_point_err = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double pj = 0.0;
      for (std::size_t i = 0; i < n; ++i) pj += stationary_[i] * transition_(i, j);
      fixed_point_err = std::max(fixed_point_err, std::fabs(pj - stationary_[j]));
      if (!(stationary_[j] > -1e-12)) throw std::runtime_error("stationary entry negative");
      stationary_[j] = std::max(stationary_[j], 0.0);
    }
    if (fixed_point_err > 1e-10)
      throw std::runtime_error("stationary distribution fixed-point residual too large");
  }

  Matrix transition_;
  std::vector<double> stationary_;
};

inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("total_variation size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::fabs(p[i] - q[i]);
  return 0.5 * s;
}

namespace detail {

inline std::vector<double> kernel_row(const Matrix& pk, std::size_t x) {
  std::vector<double> row(pk.cols);
  for (std::size_t j = 0; j < pk.cols; ++j) row[j] = pk(x, j);
  return row;
}

}  // namespace detail

// beta(k) of the stationary chain: the stationary average of the total
// variation between the k-step kernel rows and the stationary distribution.
// For a Markov chain this coupling identity collapses the sigma-algebra
// suprema of the general definition; it is cross-checked against the
// cylinder-enumeration oracle in the tests before anything relies on it.
inline double exact_beta(const MarkovChainModel& model, long k) {
  if (k < 1) throw std::invalid_argument("exact_beta needs k >= 1");
  const Matrix pk = matrix_power(model.transition(), static_cast<unsigned long long>(k));
  const std::size_t n = pk.rows;
  double acc = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    acc += model.stationary()[x] *
           total_variation(detail::kernel_row(pk, x), model.stationary());
  return std::clamp(acc, 0.0, 1.0);
}

// phi(k): as exact_beta but with the supremum over the starting state in
// place of the stationary average.
inline double exact_phi(const MarkovChainModel& model, long k) {
  if (k < 1) throw std::invalid_argument("exact_phi needs k >= 1");
  const Matrix pk = matrix_power(model.transition(), static_cast<unsigned long long>(k));
  const std::size_t n = pk.rows;
  double worst = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    worst = std::max(worst,
                     total_variation(detail::kernel_row(pk, x), model.stationary()));
  return std::clamp(worst, 0.0, 1.0);
}

// Exact-table profile of the chain's coefficients for k = 1..k_max.
inline MixingProfile profile_from_chain(const MarkovChainModel& model, long k_max,
                                        CoefficientType type) {
  if (k_max < 1) throw std::invalid_argument("profile_from_chain needs k_max >= 1");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(k_max));
  Matrix pk = model.transition();
  for (long k = 1; k <= k_max; ++k) {
    if (k > 1) pk = multiply(pk, model.transition());
    double v = 0.0;
    for (std::size_t x = 0; x < pk.rows; ++x) {
      const double tv = total_variation(detail::kernel_row(pk, x), model.stationary());
      if (type == CoefficientType::beta)
        v += model.stationary()[x] * tv;
      else
        v = std::max(v, tv);
    }
    values.push_back(std::clamp(v, 0.0, 1.0));
  }
  return MixingProfile::exact_table(type, std::move(values));
}

// Modulus of the second-largest eigenvalue. Analytic for n <= 3 (deflating
// the known eigenvalue 1), power iteration on P - 1*pi^T otherwise.
inline double second_eigenvalue_modulus(const MarkovChainModel& model) {
  const std::size_t n = static_cast<std::size_t>(model.n_states());
  const Matrix& p = model.transition();
  if (n == 1) return 0.0;
  if (n == 2) return std::fabs(p(0, 0) + p(1, 1) - 1.0);
  if (n == 3) {
    const double tr = p(0, 0) + p(1, 1) + p(2, 2);
    const double det = p(0, 0) * (p(1, 1) * p(2, 2) - p(1, 2) * p(2, 1)) -
                       p(0, 1) * (p(1, 0) * p(2, 2) - p(1, 2) * p(2, 0)) +
                       p(0, 2) * (p(1, 0) * p(2, 1) - p(1, 1) * p(2, 0));
    // remaining eigenvalues solve x^2 + (1 - tr) x + det = 0
    const double bq = 1.0 - tr;
    const double disc = bq * bq - 4.0 * det;
    if (disc >= 0.0) {
      const double r1 = (-bq + std::sqrt(disc)) / 2.0;
      const double r2 = (-bq - std::sqrt(disc)) / 2.0;
      return std::max(std::fabs(r1), std::fabs(r2));
    }
    return std::sqrt(det);  // complex pair, |x| = sqrt(product of roots)
  }
  Matrix deflated = p;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) deflated(i, j) -= model.stationary()[j];
  std::vector<double> v(n);
  Rng rng(0x9e3779b9u);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  double norm = std::sqrt(dot(v, v));
  for (auto& x : v) x /= norm;
  double estimate = 0.0;
  const int burn = 200, window = 64;
  double growth = 1.0;
  for (int it = 0; it < burn + window; ++it) {
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) w[i] += deflated(i, j) * v[j];
    const double wn = std::sqrt(dot(w, w));
    if (wn < 1e-300) return 0.0;
    if (it >= burn) growth *= wn;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;
  }
  estimate = std::pow(growth, 1.0 / window);
  return estimate;
}

}  // namespace mixbound
