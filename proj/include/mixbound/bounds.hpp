#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixbound/learners.hpp"
#include "mixbound/mixing.hpp"

namespace mixbound {

// Evaluated generalization bound, in either direction. For delta-of-epsilon
// the value is a probability (clamped to [0,1], flagged vacuous when the raw
// value reaches 1); for epsilon-of-delta it is the full gap threshold,
// concentration slack plus additive offset. All intermediate constants are
// kept in `terms` so sweeps and reports can expose them.
struct BoundReport {
  std::string theorem;
  std::string direction;  // "delta-of-epsilon" | "epsilon-of-delta"
  double bound_value = 0.0;
  bool is_probability = false;
  bool vacuous = false;
  double epsilon = 0.0;  // input epsilon (concentration part) when given
  double delta = 0.0;    // input delta when given
  double b_real = 0.0;
  long b = 0;
  long a = 0;
  long mu = 0;
  std::map<std::string, double> terms;
};

struct PhiBoundInputs {
  double beta_hat = 0.0;
  double M = 1.0;
  long m = 0;
  MixingProfile profile = MixingProfile::zero(CoefficientType::phi);
  long b = 0;
  std::optional<double> epsilon;
  std::optional<double> delta;
};

struct BetaBoundInputs {
  double beta_hat = 0.0;
  double M = 1.0;
  long m = 0;
  MixingProfile profile = MixingProfile::zero(CoefficientType::beta);
  long a = 0;
  long b = 0;
  long mu = 0;
  std::optional<double> epsilon;
  std::optional<double> delta;
};

namespace detail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

inline void check_direction(const std::optional<double>& epsilon,
                            const std::optional<double>& delta) {
  require(epsilon.has_value() != delta.has_value(),
          "exactly one of epsilon and delta must be given");
  if (epsilon) require(*epsilon >= 0.0, "epsilon must be >= 0");
  if (delta)
    require(*delta > 0.0 && *delta < 1.0,
            "delta must lie in (0,1); a probability bound of 1 or more is vacuous by "
            "definition and cannot be inverted");
}

}  // namespace detail

// Stability bound for phi-mixing stationary sequences, at an explicit block
// cutoff b in [0, m]:
//   Pr[|R - Rhat| > eps + (6b+1) bh + 6 M phi(b)]
//     <= 2 exp(-2 eps^2 (1 + 2 sum_{i<=m} phi(i))^-2 / (m ((b+1) 2 bh + 2 M phi(b) + M/m)^2)).
// With phi == 0 and b = 0 this is exactly the i.i.d. stability bound. The
// inverse direction solves the exponential for eps at a requested delta and
// reports the full gap threshold.
inline BoundReport phi_bound_general(const PhiBoundInputs& in) {
  detail::require(in.m >= 1, "m must be >= 1");
  detail::require(in.M > 0.0, "M must be > 0");
  detail::require(in.beta_hat >= 0.0, "beta_hat must be >= 0");
  detail::require(in.b >= 0 && in.b <= in.m, "b must lie in [0, m]");
  detail::require(in.profile.coefficient_type() == CoefficientType::phi,
                  "phi bound needs a phi-type mixing profile");
  detail::check_direction(in.epsilon, in.delta);

  const double md = static_cast<double>(in.m);
  const double bd = static_cast<double>(in.b);
  const double phi_b = in.profile.value(in.b);
  const double delta_m = in.profile.one_plus_two_sum(in.m);
  const double lipschitz = (bd + 1.0) * 2.0 * in.beta_hat + 2.0 * in.M * phi_b + in.M / md;
  const double offset = (6.0 * bd + 1.0) * in.beta_hat + 6.0 * in.M * phi_b;

  BoundReport r;
  r.theorem = "phi-general";
  r.b = in.b;
  r.b_real = bd;
  r.terms["phi_b"] = phi_b;
  r.terms["concentration_constant"] = delta_m;
  r.terms["lipschitz"] = lipschitz;
  r.terms["offset"] = offset;

  if (in.epsilon) {
    const double eps = *in.epsilon;
    r.direction = "delta-of-epsilon";
    r.is_probability = true;
    r.epsilon = eps;
    const double raw =
        2.0 * std::exp(-2.0 * eps * eps / (delta_m * delta_m * md * lipschitz * lipschitz));
    r.vacuous = raw >= 1.0;
    r.bound_value = std::min(raw, 1.0);
    r.terms["delta_raw"] = raw;
    r.terms["gap_threshold"] = eps + offset;
  } else {
    const double dl = *in.delta;
    r.direction = "epsilon-of-delta";
    r.delta = dl;
    const double eps_conc = delta_m * lipschitz * std::sqrt(md * std::log(2.0 / dl) / 2.0);
    r.epsilon = eps_conc;
    r.bound_value = eps_conc + offset;
    r.terms["epsilon_concentration"] = eps_conc;
  }
  return r;
}

// Scan integer b in [0, m] for the cutoff minimizing the bound: the raw
// probability in the forward direction (at fixed concentration slack), the
// full gap threshold in the inverse direction. The trade-off b*bh versus
// M*phi(b) is unimodal for monotone profiles, but the scan is cheap and
// makes no assumption.
inline BoundReport phi_bound_best_b(double beta_hat, double M, long m,
                                    const MixingProfile& profile,
                                    std::optional<double> epsilon,
                                    std::optional<double> delta, long b_max = -1) {
  if (b_max < 0 || b_max > m) b_max = m;
  std::optional<BoundReport> best;
  double best_score = 0.0;
  for (long b = 0; b <= b_max; ++b) {
    PhiBoundInputs in{beta_hat, M, m, profile, b, epsilon, delta};
    BoundReport r = phi_bound_general(in);
    const double score = r.is_probability ? r.terms["delta_raw"] : r.bound_value;
    if (!best || score < best_score) {
      best_score = score;
      best = std::move(r);
    }
  }
  return *best;
}

struct AlgebraicPhiConstants {
  double u = 0.0;          // r/(r+1)
  double b_star = 0.0;     // optimal real cutoff, beta_hat * b = r M phi(b)
  double phi_b_star = 0.0;
  double m_prime = 0.0;    // M' = 2 (r+1) phi0 M / (r phi0 M)^u
  double phi0_prime = 0.0; // 1 + 2 phi0 r / (r-1)
};

inline AlgebraicPhiConstants algebraic_phi_constants(double beta_hat, double M, double phi0,
                                                     double r) {
  if (!(r > 1.0))
    throw std::domain_error(
        "algebraic phi-mixing bound requires r > 1; slower polynomial mixing is an "
        "unsupported regime");
  detail::require(beta_hat > 0.0, "beta_hat must be > 0 for the algebraic cutoff");
  detail::require(phi0 > 0.0, "phi0 must be > 0 (use the zero profile otherwise)");
  detail::require(M > 0.0, "M must be > 0");
  AlgebraicPhiConstants c;
  c.u = r / (r + 1.0);
  const double ratio = beta_hat / (r * phi0 * M);
  c.b_star = std::pow(ratio, -1.0 / (r + 1.0));
  c.phi_b_star = phi0 * std::pow(ratio, c.u);
  c.m_prime = 2.0 * (r + 1.0) * phi0 * M / std::pow(r * phi0 * M, c.u);
  c.phi0_prime = 1.0 + 2.0 * phi0 * r / (r - 1.0);
  return c;
}

// Algebraically phi-mixing stability bound, phi(k) = phi0 k^-r with r > 1,
// evaluated at the optimal real cutoff b* satisfying beta_hat b = r M phi(b).
// The additive offset is beta_hat + 6 (r+1) M phi(b*) = beta_hat + 3 M' bh^u.
// Both directions use the concentration coefficient of the paper's kernel
// corollaries, phi0' (M + m bh + m M' bh^u) sqrt(2 log(2/delta) / m), so the
// two code paths invert each other exactly; the tighter theorem-form delta is
// reported alongside as a term.
inline BoundReport phi_bound_algebraic(double beta_hat, double M, long m, double phi0,
                                       double r, std::optional<double> epsilon,
                                       std::optional<double> delta) {
  detail::require(m >= 1, "m must be >= 1");
  detail::check_direction(epsilon, delta);
  const AlgebraicPhiConstants c = algebraic_phi_constants(beta_hat, M, phi0, r);

  const double md = static_cast<double>(m);
  const double bh_u = std::pow(beta_hat, c.u);
  const double offset = beta_hat + 3.0 * c.m_prime * bh_u;
  const double coeff = c.phi0_prime * (M + md * beta_hat + md * c.m_prime * bh_u);
  const double lipschitz_thm = 2.0 * beta_hat + 2.0 * (r + 1.0) * M * c.phi_b_star + M / md;

  BoundReport rep;
  rep.theorem = "phi-algebraic";
  rep.b_real = c.b_star;
  rep.b = static_cast<long>(std::llround(c.b_star));
  rep.terms["u"] = c.u;
  rep.terms["b_star"] = c.b_star;
  rep.terms["phi_b_star"] = c.phi_b_star;
  rep.terms["M_prime"] = c.m_prime;
  rep.terms["phi0_prime"] = c.phi0_prime;
  rep.terms["offset"] = offset;
  rep.terms["lipschitz_theorem"] = lipschitz_thm;

  // neighbors of b* under the general evaluator with the same envelope
  const MixingProfile envelope = MixingProfile::algebraic(CoefficientType::phi, phi0, r);
  const long b_lo = std::clamp(static_cast<long>(std::floor(c.b_star)), 0L, m);
  const long b_hi = std::clamp(static_cast<long>(std::ceil(c.b_star)), 0L, m);
  {
    PhiBoundInputs lo_in{beta_hat, M, m, envelope, b_lo, epsilon, delta};
    PhiBoundInputs hi_in{beta_hat, M, m, envelope, b_hi, epsilon, delta};
    rep.terms["b_floor"] = static_cast<double>(b_lo);
    rep.terms["b_ceil"] = static_cast<double>(b_hi);
    rep.terms["general_bound_at_b_floor"] = phi_bound_general(lo_in).bound_value;
    rep.terms["general_bound_at_b_ceil"] = phi_bound_general(hi_in).bound_value;
  }

  if (epsilon) {
    const double eps = *epsilon;
    rep.direction = "delta-of-epsilon";
    rep.is_probability = true;
    rep.epsilon = eps;
    const double raw = 2.0 * std::exp(-md * eps * eps / (2.0 * coeff * coeff));
    rep.vacuous = raw >= 1.0;
    rep.bound_value = std::min(raw, 1.0);
    rep.terms["delta_raw"] = raw;
    rep.terms["gap_threshold"] = eps + offset;
    rep.terms["delta_theorem_form"] = std::min(
        1.0, 2.0 * std::exp(-2.0 * eps * eps /
                            (c.phi0_prime * c.phi0_prime * md * lipschitz_thm * lipschitz_thm)));
  } else {
    const double dl = *delta;
    rep.direction = "epsilon-of-delta";
    rep.delta = dl;
    const double eps_conc = coeff * std::sqrt(2.0 * std::log(2.0 / dl) / md);
    rep.epsilon = eps_conc;
    rep.bound_value = offset + eps_conc;
    rep.terms["epsilon_concentration"] = eps_conc;
  }
  return rep;
}

// High-probability generalization gap of the kernel and relative-entropy
// families under algebraic phi-mixing, written exactly as the per-family
// corollaries print them. Cross-checks against phi_bound_algebraic fed with
// the family's certified (beta_hat, M).
inline BoundReport corollary_bound(LearnerKind kind, double kappa, double lambda, double B,
                                   double M_internal, long m, double phi0, double r,
                                   double delta) {
  detail::require(m >= 1, "m must be >= 1");
  detail::require(lambda > 0.0, "lambda must be > 0");
  detail::require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
  if (!(r > 1.0))
    throw std::domain_error(
        "kernel corollaries require r > 1; slower polynomial mixing is an unsupported "
        "regime");
  detail::require(phi0 > 0.0, "phi0 must be > 0");

  const double md = static_cast<double>(m);
  const double u = r / (r + 1.0);
  const double phi0_prime = 1.0 + 2.0 * phi0 * r / (r - 1.0);
  const double sq = std::sqrt(2.0 * std::log(2.0 / delta) / md);
  const double k2l = kappa * kappa / lambda;

  double M = 0.0, gap = 0.0, m_prime = 0.0, beta_hat = 0.0;
  switch (kind) {
    case LearnerKind::SVM: {
      M = 1.0;
      m_prime = 2.0 * (r + 1.0) * phi0 * M / std::pow(r * phi0 * M, u);
      beta_hat = k2l / md;
      gap = k2l / md + std::pow(k2l, u) * 3.0 * m_prime / std::pow(md, u) +
            phi0_prime * (1.0 + k2l + std::pow(k2l, u) * m_prime / std::pow(md, u - 1.0)) * sq;
      break;
    }
    case LearnerKind::SVR: {
      detail::require(B > 0.0, "B must be > 0");
      M = kappa * std::sqrt(B / lambda) + B;
      m_prime = 2.0 * (r + 1.0) * phi0 * M / std::pow(r * phi0 * M, u);
      beta_hat = k2l / md;
      gap = k2l / md + std::pow(k2l, u) * 3.0 * m_prime / std::pow(md, u) +
            phi0_prime * (M + k2l + std::pow(k2l, u) * m_prime / std::pow(md, u - 1.0)) * sq;
      break;
    }
    case LearnerKind::KRR: {
      detail::require(B > 0.0, "B must be > 0");
      const double q = 4.0 * kappa * kappa * B * B / lambda;
      M = kappa * kappa * B * B / lambda + B * B;
      m_prime = 2.0 * (r + 1.0) * phi0 * M / std::pow(r * phi0 * M, u);
      beta_hat = q / md;
      gap = q / md + std::pow(q, u) * 3.0 * m_prime / std::pow(md, u) +
            phi0_prime * (M + q + std::pow(q, u) * m_prime / std::pow(md, u - 1.0)) * sq;
      break;
    }
    case LearnerKind::EntropyMixture: {
      detail::require(M_internal > 0.0, "internal cost bound must be > 0");
      M = M_internal;
      m_prime = 2.0 * (r + 1.0) * phi0 * std::pow(M, u + 1.0) / std::pow(r * phi0, u);
      beta_hat = M * M / (lambda * md);
      gap = M * M / (lambda * md) +
            3.0 * m_prime / (std::pow(lambda, u) * std::pow(md, u)) +
            phi0_prime *
                (M + M * M / lambda + m_prime / (std::pow(lambda, u) * std::pow(md, u - 1.0))) *
                sq;
      break;
    }
  }

  BoundReport rep;
  rep.theorem = "corollary-" + to_string(kind);
  rep.direction = "epsilon-of-delta";
  rep.delta = delta;
  rep.bound_value = gap;
  rep.terms["u"] = u;
  rep.terms["M"] = M;
  rep.terms["M_prime"] = m_prime;
  rep.terms["phi0_prime"] = phi0_prime;
  rep.terms["beta_hat"] = beta_hat;
  return rep;
}

// Stability bound for beta-mixing stationary sequences over mu blocks of
// a + b points ((a + b) mu = m exactly):
//   Pr[|R - Rhat| >= eps] <= exp(-2 eps'^2 m / (2 a bh m + (a+b) M)^2) + (mu-1) beta(b),
// with eps' = eps - mu b M / m - 2 mu b bh - a bh. The inverse direction is
// the corollary form at delta' = delta - (mu-1) beta(b). The remark that
// beta == 0 retrieves the i.i.d. bound with "a=0, b=1, mu=m" conflicts with
// (a+b) mu = m and a,b,mu > 0; for the zero profile we instead admit b = 0
// with (a, mu) = (1, m), which makes the displayed formula itself reduce to
// the i.i.d. form exp(-2 (eps - bh)^2 m / (2 bh m + M)^2).
inline BoundReport beta_bound(const BetaBoundInputs& in) {
  detail::require(in.m >= 1, "m must be >= 1");
  detail::require(in.M > 0.0, "M must be > 0");
  detail::require(in.beta_hat >= 0.0, "beta_hat must be >= 0");
  detail::require(in.profile.coefficient_type() == CoefficientType::beta,
                  "beta bound needs a beta-type mixing profile");
  const bool zero_path = in.profile.is_zero();
  detail::require(in.a >= 1 && in.mu >= 1 && (in.b >= 1 || (zero_path && in.b >= 0)),
                  "block parameters a, b, mu must be positive (b = 0 only on the "
                  "zero-mixing special path)");
  detail::require((in.a + in.b) * in.mu == in.m, "(a + b) * mu must equal m exactly");
  detail::check_direction(in.epsilon, in.delta);

  const double md = static_cast<double>(in.m);
  const double ad = static_cast<double>(in.a);
  const double bd = static_cast<double>(in.b);
  const double mud = static_cast<double>(in.mu);
  const double beta_b = in.profile.value(in.b);
  const double penalty = (mud - 1.0) * beta_b;
  const double denom = 2.0 * ad * in.beta_hat * md + (ad + bd) * in.M;
  const double block_slack = mud * bd * (in.M / md + 2.0 * in.beta_hat) + ad * in.beta_hat;

  BoundReport rep;
  rep.theorem = "beta";
  rep.a = in.a;
  rep.b = in.b;
  rep.mu = in.mu;
  rep.terms["beta_b"] = beta_b;
  rep.terms["mixing_penalty"] = penalty;
  rep.terms["mcdiarmid_denominator"] = denom;
  rep.terms["block_slack"] = block_slack;

  if (in.epsilon) {
    const double eps = *in.epsilon;
    rep.direction = "delta-of-epsilon";
    rep.is_probability = true;
    rep.epsilon = eps;
    const double eps_prime = eps - block_slack;
    if (eps_prime < 0.0)
      throw std::domain_error(
          "infeasible epsilon: the theorem requires eps' = eps - mu b M/m - 2 mu b "
          "beta_hat - a beta_hat >= 0");
    rep.terms["epsilon_prime"] = eps_prime;
    const double raw = std::exp(-2.0 * eps_prime * eps_prime * md / (denom * denom)) + penalty;
    rep.vacuous = raw >= 1.0;
    rep.bound_value = std::min(raw, 1.0);
    rep.terms["delta_raw"] = raw;
  } else {
    const double dl = *in.delta;
    rep.direction = "epsilon-of-delta";
    rep.delta = dl;
    const double delta_prime = dl - penalty;
    if (delta_prime <= 0.0)
      throw std::domain_error(
          "infeasible delta: the corollary requires delta' = delta - (mu - 1) beta(b) > 0");
    rep.terms["delta_prime"] = delta_prime;
    const double eps_conc = std::sqrt(std::log(1.0 / delta_prime) / (2.0 * md)) *
                            (2.0 * ad * in.beta_hat * md + in.M * md / mud);
    rep.epsilon = eps_conc;
    rep.bound_value = eps_conc + block_slack;
    rep.terms["epsilon_concentration"] = eps_conc;
  }
  return rep;
}

// Shape function traded off when choosing the block parameters under
// algebraic beta-mixing, beta(b) = b^-r:
//   s(mu, b) = mu / b^r + m^{3/2} bh / mu + m^{1/2} / mu + mu b (1/m + bh).
inline double block_shape(double mu, double b, double beta_hat, double m, double r) {
  return mu / std::pow(b, r) + std::pow(m, 1.5) * beta_hat / mu + std::sqrt(m) / mu +
         mu * b * (1.0 / m + beta_hat);
}

// High-probability beta-mixing gap at real-valued block parameters with the
// algebraic coefficient beta(b) = b^-r. Rate studies evaluate the closed-form
// (a, b, mu) directly; the integer-snapped path is beta_bound.
inline double beta_gap_at_real_blocks(double beta_hat, double M, double m, double a, double b,
                                      double mu, double r, double delta) {
  detail::require(m >= 1.0 && a > 0.0 && b > 0.0 && mu > 0.0, "block parameters must be positive");
  const double penalty = (mu - 1.0) * std::pow(b, -r);
  const double delta_prime = delta - penalty;
  if (delta_prime <= 0.0)
    throw std::domain_error(
        "infeasible delta: the corollary requires delta' = delta - (mu - 1) beta(b) > 0");
  return std::sqrt(std::log(1.0 / delta_prime) / (2.0 * m)) *
             (2.0 * a * beta_hat * m + M * m / mu) +
         mu * b * (M / m + 2.0 * beta_hat) + a * beta_hat;
}

struct BlockChoice {
  long b = 0;
  long mu = 0;
  long a = 0;
  double b_real = 0.0;
  double mu_real = 0.0;
  double a_real = 0.0;
  double s_integer = 0.0;
  double s_real = 0.0;
  double gamma = 0.0;
  double c_r = 0.0;
};

// Closed-form minimizer of the shape function,
//   b = C_r gamma^{-1/(r+1)},  mu = m^{3/4} gamma^{1/(2(r+1))} / sqrt(C_r (1 + 1/r)),
// with gamma = 1/m + beta_hat and C_r = r^{1/(r+1)}, then snapped to a
// feasible integer triple: mu must divide m for (a + b) mu = m to hold, so
// the integer neighbors of mu are rounded to the bracketing divisors of m
// and b to its integer neighbors, taking the candidate minimizing s.
inline BlockChoice optimize_beta_blocks(double beta_hat, double M, long m, double r) {
  (void)M;  // the shape function is normalized; M enters the bound itself only
  if (!(r > 1.0)) throw std::domain_error("block optimization requires r > 1");
  detail::require(beta_hat > 0.0, "beta_hat must be > 0");
  detail::require(m >= 4, "m too small for a feasible block triple");

  BlockChoice choice;
  const double md = static_cast<double>(m);
  choice.gamma = 1.0 / md + beta_hat;
  choice.c_r = std::pow(r, 1.0 / (r + 1.0));
  choice.b_real = choice.c_r * std::pow(choice.gamma, -1.0 / (r + 1.0));
  choice.mu_real = std::pow(md, 0.75) * std::pow(choice.gamma, 1.0 / (2.0 * (r + 1.0))) /
                   std::sqrt(choice.c_r * (1.0 + 1.0 / r));
  choice.a_real = md / choice.mu_real - choice.b_real;
  choice.s_real = block_shape(choice.mu_real, choice.b_real, beta_hat, md, r);

  std::vector<long> divisors;
  for (long d = 1; d * d <= m; ++d) {
    if (m % d == 0) {
      divisors.push_back(d);
      divisors.push_back(m / d);
    }
  }
  std::sort(divisors.begin(), divisors.end());

  long mu_below = -1, mu_above = -1;
  for (long d : divisors) {
    if (static_cast<double>(d) <= choice.mu_real) mu_below = d;
    if (static_cast<double>(d) >= choice.mu_real && mu_above < 0) mu_above = d;
  }

  bool found = false;
  double best_s = 0.0;
  for (long mu : {mu_below, mu_above}) {
    if (mu < 1) continue;
    const long len = m / mu;
    for (long b : {static_cast<long>(std::floor(choice.b_real)),
                   static_cast<long>(std::ceil(choice.b_real))}) {
      const long bb = std::clamp(b, 1L, len - 1);
      const long a = len - bb;
      if (a < 1) continue;
      const double s = block_shape(static_cast<double>(mu), static_cast<double>(bb),
                                   beta_hat, md, r);
      if (!found || s < best_s) {
        found = true;
        best_s = s;
        choice.mu = mu;
        choice.b = bb;
        choice.a = a;
        choice.s_integer = s;
      }
    }
  }
  if (!found)
    throw std::invalid_argument("no feasible integer block triple (a, b, mu) for this m");
  return choice;
}

struct RatePrediction {
  double exponent_a = 0.0;   // 3/4 - alpha (1 - 1/(2(r+1)))
  double exponent_b = 0.0;   // alpha/(2(r+1)) - 1/4
  double dominant = 0.0;     // slower-decaying of the two
  double alpha_threshold = 0.0;  // (3r+3)/(4r+2); below or at it the bound diverges
  bool diverges = false;
  std::vector<double> m_values;
  std::vector<double> term_a;
  std::vector<double> term_b;
};

// Predicted asymptotics of the optimized beta-mixing bound when
// beta_hat ~ m^-alpha. At alpha = 1 the dominant exponent is
// 1/(2(r+1)) - 1/4, and convergence requires r > 1.
inline RatePrediction rate_curve(double alpha, double r, const std::vector<long>& m_list) {
  detail::require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
  detail::require(r > 0.0, "r must be > 0");
  RatePrediction p;
  p.exponent_a = 0.75 - alpha * (1.0 - 1.0 / (2.0 * (r + 1.0)));
  p.exponent_b = alpha / (2.0 * (r + 1.0)) - 0.25;
  p.dominant = std::max(p.exponent_a, p.exponent_b);
  p.alpha_threshold = (3.0 * r + 3.0) / (4.0 * r + 2.0);
  p.diverges = alpha <= p.alpha_threshold;
  for (long m : m_list) {
    const double md = static_cast<double>(m);
    p.m_values.push_back(md);
    p.term_a.push_back(std::pow(md, p.exponent_a));
    p.term_b.push_back(std::pow(md, p.exponent_b));
  }
  return p;
}

}  // namespace mixbound
