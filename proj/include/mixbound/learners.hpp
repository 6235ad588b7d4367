#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixbound/kernels.hpp"
#include "mixbound/linalg.hpp"
#include "mixbound/rng.hpp"
#include "mixbound/sequence.hpp"

namespace mixbound {

enum class LearnerKind { KRR, SVR, SVM, EntropyMixture };

inline std::string to_string(LearnerKind k) {
  switch (k) {
    case LearnerKind::KRR: return "krr";
    case LearnerKind::SVR: return "svr";
    case LearnerKind::SVM: return "svm";
    case LearnerKind::EntropyMixture: return "entropy-mixture";
  }
  return "?";
}

inline LearnerKind learner_kind_from(const std::string& s) {
  if (s == "krr") return LearnerKind::KRR;
  if (s == "svr") return LearnerKind::SVR;
  if (s == "svm") return LearnerKind::SVM;
  if (s == "entropy-mixture" || s == "entropy") return LearnerKind::EntropyMixture;
  throw std::invalid_argument("unknown learner kind: " + s);
}

// Regularized learner specification. lambda scales the squared RKHS norm
// (or the relative entropy for the mixture learner); B bounds the labels.
// sigma is the admissibility constant of the cost in the predicted value:
// 1 for the hinge and eps-insensitive costs, 2B for the squared cost.
struct KernelLearnerSpec {
  LearnerKind kind = LearnerKind::KRR;
  double lambda = 1.0;
  Kernel kernel = Kernel::rbf(1.0);
  double epsilon_tube = 0.1;  // SVR only
  double B = 1.0;             // label bound, Y = [0, B] (labels in {-1,+1} for SVM)
  int n_theta = 33;           // entropy mixture: size of the finite parameter grid
  double entropy_M = 0.0;     // entropy mixture: bound on the internal cost (0 = use B)
  long solver_sweep_cap = 100000;  // SVR/SVM coordinate sweeps before flagging

  double sigma_admissibility() const {
    switch (kind) {
      case LearnerKind::KRR: return 2.0 * B;
      case LearnerKind::SVR:
      case LearnerKind::SVM: return 1.0;
      case LearnerKind::EntropyMixture: return 0.0;  // not a kernel learner
    }
    return 0.0;
  }

  double entropy_cost_bound() const { return entropy_M > 0.0 ? entropy_M : B; }

  void validate() const {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
    if (!(B > 0.0)) throw std::invalid_argument("label bound B must be > 0");
    if (kind == LearnerKind::SVR && epsilon_tube < 0.0)
      throw std::invalid_argument("epsilon tube must be >= 0");
    if (kind == LearnerKind::SVM && std::fabs(B - 1.0) > 1e-12)
      throw std::invalid_argument("SVM labels are {-1,+1}; B must be 1");
    if (kind == LearnerKind::EntropyMixture && n_theta < 2)
      throw std::invalid_argument("entropy mixture needs at least 2 grid points");
  }
};

// Point costs exactly as the learner families define them.
inline double cost_squared(double pred, double y) { return (pred - y) * (pred - y); }

inline double cost_eps_insensitive(double pred, double y, double eps) {
  const double d = std::fabs(pred - y);
  return d <= eps ? 0.0 : d - eps;
}

// Hinge with the three-case definition: linear on 0 <= y*h < 1, capped at 1
// once the prediction has the wrong sign.
inline double cost_hinge_capped(double pred, double y) {
  const double margin = y * pred;
  if (margin >= 1.0) return 0.0;
  if (margin < 0.0) return 1.0;
  return 1.0 - margin;
}

enum class CertificateProvenance { Formula, Empirical };

// Uniform-stability certificate (beta_hat, M) for a learner at sample size m.
struct StabilityCertificate {
  LearnerKind kind;
  double beta_hat = 0.0;
  double M = 0.0;
  CertificateProvenance provenance = CertificateProvenance::Formula;
  // inputs the formula was evaluated on
  double sigma = 0.0;
  double kappa = 0.0;
  double lambda = 0.0;
  long m = 0;
};

// Closed-form certificate:
//   KRR             beta_hat = 4 kappa^2 B^2 / (lambda m),  M = kappa^2 B^2 / lambda + B^2
//   SVR             beta_hat = kappa^2 / (lambda m),        M = kappa sqrt(B/lambda) + B
//   SVM             beta_hat = kappa^2 / (lambda m),        M = 1
//   entropy mixture beta_hat = M^2 / (lambda m)
inline StabilityCertificate certify_stability(const KernelLearnerSpec& spec, long m,
                                              double kappa = 0.0) {
  spec.validate();
  if (m < 1) throw std::invalid_argument("certify_stability needs m >= 1");
  StabilityCertificate c;
  c.kind = spec.kind;
  c.lambda = spec.lambda;
  c.m = m;
  c.sigma = spec.sigma_admissibility();
  const double md = static_cast<double>(m);
  if (spec.kind == LearnerKind::EntropyMixture) {
    c.M = spec.entropy_cost_bound();
    c.beta_hat = c.M * c.M / (spec.lambda * md);
    return c;
  }
  if (kappa <= 0.0) kappa = spec.kernel.kappa_for({});
  c.kappa = kappa;
  const double k2 = kappa * kappa;
  switch (spec.kind) {
    case LearnerKind::KRR:
      c.beta_hat = 4.0 * k2 * spec.B * spec.B / (spec.lambda * md);
      c.M = k2 * spec.B * spec.B / spec.lambda + spec.B * spec.B;
      break;
    case LearnerKind::SVR:
      c.beta_hat = k2 / (spec.lambda * md);
      c.M = kappa * std::sqrt(spec.B / spec.lambda) + spec.B;
      break;
    case LearnerKind::SVM:
      c.beta_hat = k2 / (spec.lambda * md);
      c.M = 1.0;
      break;
    default:
      break;
  }
  return c;
}

struct TrainedModel {
  LearnerKind kind;
  KernelLearnerSpec spec;
  std::vector<std::vector<double>> support_inputs;
  // h(x) = sum_i dual_coefficients[i] * K(support_inputs[i], x) for the kernel
  // learners; Gibbs weights over theta_grid for the entropy mixture.
  std::vector<double> dual_coefficients;
  std::vector<double> theta_grid;
  double kappa = 0.0;
  double objective_value = 0.0;
  bool converged = true;
  long sweeps = 0;
  double krr_residual_inf = 0.0;

  long m() const { return static_cast<long>(kind == LearnerKind::EntropyMixture
                                                ? theta_grid.size()
                                                : support_inputs.size()); }

  // kappa * sqrt(B(0)/lambda) with B(0) the cost of the zero hypothesis:
  // B^2 for the squared cost, B for eps-insensitive, 1 for the hinge. The
  // entropy mixture predicts convex combinations of the grid, bounded by B.
  double output_bound() const {
    switch (kind) {
      case LearnerKind::KRR:
        return kappa * std::sqrt(spec.B * spec.B / spec.lambda);
      case LearnerKind::SVR:
        return kappa * std::sqrt(spec.B / spec.lambda);
      case LearnerKind::SVM:
        return kappa * std::sqrt(1.0 / spec.lambda);
      case LearnerKind::EntropyMixture:
        return spec.B;
    }
    return 0.0;
  }
};

inline double predict(const TrainedModel& model, const std::vector<double>& x) {
  if (model.kind == LearnerKind::EntropyMixture) {
    double p = 0.0;
    for (std::size_t j = 0; j < model.theta_grid.size(); ++j)
      p += model.dual_coefficients[j] * model.theta_grid[j];
    return p;
  }
  double h = 0.0;
  for (std::size_t i = 0; i < model.support_inputs.size(); ++i) {
    const double w = model.dual_coefficients[i];
    if (w == 0.0) continue;
    h += w * model.spec.kernel.eval(model.support_inputs[i], x);
  }
  return h;
}

// c(h, z) with z = (x, y). For the entropy mixture this is the g-expected
// internal cost, which is the quantity the mixture learner regularizes.
inline double cost(const TrainedModel& model, const std::vector<double>& x, double y) {
  switch (model.kind) {
    case LearnerKind::KRR:
      return cost_squared(predict(model, x), y);
    case LearnerKind::SVR:
      return cost_eps_insensitive(predict(model, x), y, model.spec.epsilon_tube);
    case LearnerKind::SVM:
      return cost_hinge_capped(predict(model, x), y);
    case LearnerKind::EntropyMixture: {
      double c = 0.0;
      for (std::size_t j = 0; j < model.theta_grid.size(); ++j)
        c += model.dual_coefficients[j] * std::fabs(model.theta_grid[j] - y);
      return c;
    }
  }
  return 0.0;
}

inline double empirical_risk(const TrainedModel& model, const LabeledSequence& data) {
  double acc = 0.0;
  for (long i = 0; i < data.size(); ++i)
    acc += cost(model, data.inputs[static_cast<std::size_t>(i)],
                data.labels[static_cast<std::size_t>(i)]);
  return acc / static_cast<double>(data.size());
}

namespace detail {

constexpr double kSolverTolerance = 1e-8;

inline TrainedModel train_krr(const KernelLearnerSpec& spec, const LabeledSequence& data) {
  const std::size_t m = data.inputs.size();
  const Matrix g = gram_matrix(spec.kernel, data.inputs);
  Matrix a = g;
  const double ridge = spec.lambda * static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) a(i, i) += ridge;
  std::vector<double> alpha = cholesky_solve(a, data.labels);

  TrainedModel model;
  model.kind = LearnerKind::KRR;
  model.spec = spec;
  model.support_inputs = data.inputs;
  model.dual_coefficients = alpha;
  model.kappa = spec.kernel.kappa_for(data.inputs);

  double obj_fit = 0.0, norm2 = 0.0, residual = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double gi = 0.0;
    for (std::size_t j = 0; j < m; ++j) gi += g(i, j) * alpha[j];
    obj_fit += cost_squared(gi, data.labels[i]);
    norm2 += alpha[i] * gi;
    residual = std::max(residual, std::fabs(gi + ridge * alpha[i] - data.labels[i]));
  }
  model.objective_value = obj_fit / static_cast<double>(m) + spec.lambda * norm2;
  model.krr_residual_inf = residual;
  return model;
}

// Cyclic coordinate ascent on the hinge-loss dual
//   max_{0 <= alpha_i <= 1/m}  sum_i alpha_i - (1/(4 lambda)) alpha^T YKY alpha,
// with h(x) = (1/(2 lambda)) sum_i alpha_i y_i K(x_i, x). The capped hinge
// used for risk evaluation coincides with the optimized hinge wherever the
// margin is nonnegative and is what all bound-facing costs use.
inline TrainedModel train_svm(const KernelLearnerSpec& spec, const LabeledSequence& data) {
  const std::size_t m = data.inputs.size();
  for (double y : data.labels)
    if (std::fabs(std::fabs(y) - 1.0) > 1e-9)
      throw std::invalid_argument("SVM training labels must be in {-1,+1}");
  const Matrix g = gram_matrix(spec.kernel, data.inputs);
  const double box = 1.0 / static_cast<double>(m);
  const double two_lambda = 2.0 * spec.lambda;

  std::vector<double> alpha(m, 0.0);
  std::vector<double> f(m, 0.0);  // f_i = h(x_i)
  auto dual_objective = [&]() {
    double v = 0.0;
    for (std::size_t i = 0; i < m; ++i) v += alpha[i] - 0.5 * alpha[i] * data.labels[i] * f[i];
    return v;
  };

  double prev = dual_objective();
  long sweeps = 0;
  bool converged = false;
  while (sweeps < spec.solver_sweep_cap) {
    ++sweeps;
    for (std::size_t i = 0; i < m; ++i) {
      const double kii = g(i, i);
      if (kii <= 0.0) continue;
      const double grad = 1.0 - data.labels[i] * f[i];
      double next = std::clamp(alpha[i] + grad * two_lambda / kii, 0.0, box);
      const double delta = next - alpha[i];
      if (delta == 0.0) continue;
      alpha[i] = next;
      const double scale = delta * data.labels[i] / two_lambda;
      for (std::size_t j = 0; j < m; ++j) f[j] += scale * g(i, j);
    }
    const double cur = dual_objective();
    if (cur - prev < kSolverTolerance) {
      converged = true;
      prev = cur;
      break;
    }
    prev = cur;
  }

  TrainedModel model;
  model.kind = LearnerKind::SVM;
  model.spec = spec;
  model.support_inputs = data.inputs;
  model.dual_coefficients.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    model.dual_coefficients[i] = alpha[i] * data.labels[i] / two_lambda;
  model.kappa = spec.kernel.kappa_for(data.inputs);
  model.converged = converged;
  model.sweeps = sweeps;
  double hinge = 0.0, norm2_scaled = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    hinge += std::max(0.0, 1.0 - data.labels[i] * f[i]);
    norm2_scaled += alpha[i] * data.labels[i] * f[i];
  }
  model.objective_value = hinge / static_cast<double>(m) + 0.5 * norm2_scaled;
  return model;
}

// Cyclic coordinate ascent on the eps-insensitive dual
//   max_{|beta_i| <= 1/m}  sum_i (beta_i y_i - eps |beta_i|)
//                          - (1/(4 lambda)) beta^T K beta,
// with h(x) = (1/(2 lambda)) sum_i beta_i K(x_i, x). Per-coordinate optimum
// is the usual soft threshold of the residual.
inline TrainedModel train_svr(const KernelLearnerSpec& spec, const LabeledSequence& data) {
  const std::size_t m = data.inputs.size();
  const Matrix g = gram_matrix(spec.kernel, data.inputs);
  const double box = 1.0 / static_cast<double>(m);
  const double two_lambda = 2.0 * spec.lambda;
  const double eps = spec.epsilon_tube;

  std::vector<double> beta(m, 0.0);
  std::vector<double> f(m, 0.0);
  auto dual_objective = [&]() {
    double v = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      v += beta[i] * data.labels[i] - eps * std::fabs(beta[i]) - 0.5 * beta[i] * f[i];
    return v;
  };

  double prev = dual_objective();
  long sweeps = 0;
  bool converged = false;
  while (sweeps < spec.solver_sweep_cap) {
    ++sweeps;
    for (std::size_t i = 0; i < m; ++i) {
      const double kii = g(i, i);
      if (kii <= 0.0) continue;
      const double s_other = two_lambda * f[i] - kii * beta[i];
      const double r = two_lambda * data.labels[i] - s_other;
      double next = 0.0;
      if (r > two_lambda * eps) next = (r - two_lambda * eps) / kii;
      else if (r < -two_lambda * eps) next = (r + two_lambda * eps) / kii;
      next = std::clamp(next, -box, box);
      const double delta = next - beta[i];
      if (delta == 0.0) continue;
      beta[i] = next;
      const double scale = delta / two_lambda;
      for (std::size_t j = 0; j < m; ++j) f[j] += scale * g(i, j);
    }
    const double cur = dual_objective();
    if (cur - prev < kSolverTolerance) {
      converged = true;
      prev = cur;
      break;
    }
    prev = cur;
  }

  TrainedModel model;
  model.kind = LearnerKind::SVR;
  model.spec = spec;
  model.support_inputs = data.inputs;
  model.dual_coefficients.resize(m);
  for (std::size_t i = 0; i < m; ++i) model.dual_coefficients[i] = beta[i] / two_lambda;
  model.kappa = spec.kernel.kappa_for(data.inputs);
  model.converged = converged;
  model.sweeps = sweeps;
  double fit = 0.0, norm2_scaled = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    fit += cost_eps_insensitive(f[i], data.labels[i], eps);
    norm2_scaled += beta[i] * f[i];
  }
  model.objective_value = fit / static_cast<double>(m) + 0.5 * norm2_scaled;
  return model;
}

// Exact Gibbs solution of the relative-entropy-regularized objective over a
// finite grid of constant predictors theta in [0, B] with internal cost
// |theta - y|: g(theta) proportional to g0(theta) exp(-Lbar(theta)/lambda).
inline TrainedModel train_entropy(const KernelLearnerSpec& spec, const LabeledSequence& data) {
  const std::size_t m = data.inputs.size();
  const std::size_t n = static_cast<std::size_t>(spec.n_theta);
  std::vector<double> thetas(n), avg_loss(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    thetas[j] = spec.B * static_cast<double>(j) / static_cast<double>(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) acc += std::fabs(thetas[j] - data.labels[i]);
    avg_loss[j] = acc / static_cast<double>(m);
  }
  double min_loss = avg_loss[0];
  for (double v : avg_loss) min_loss = std::min(min_loss, v);
  std::vector<double> weights(n);
  double z = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    weights[j] = std::exp(-(avg_loss[j] - min_loss) / spec.lambda);
    z += weights[j];
  }
  for (auto& w : weights) w /= z;

  TrainedModel model;
  model.kind = LearnerKind::EntropyMixture;
  model.spec = spec;
  model.theta_grid = std::move(thetas);
  model.dual_coefficients = std::move(weights);
  double obj = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = model.dual_coefficients[j];
    obj += w * avg_loss[j];
    if (w > 0.0) obj += spec.lambda * w * std::log(w * static_cast<double>(n));
  }
  model.objective_value = obj;
  return model;
}

}  // namespace detail

inline TrainedModel train(const KernelLearnerSpec& spec, const LabeledSequence& data) {
  spec.validate();
  if (data.size() < 1) throw std::invalid_argument("training needs m >= 1");
  if (spec.kind != LearnerKind::EntropyMixture && spec.kernel.declared_kappa > 0.0) {
    // a declared bound must actually hold on the training inputs
    const double k2 = spec.kernel.declared_kappa * spec.kernel.declared_kappa;
    for (const auto& x : data.inputs)
      if (spec.kernel.eval(x, x) > k2 + 1e-9)
        throw std::invalid_argument("declared kappa^2 violated on a training input");
  }
  switch (spec.kind) {
    case LearnerKind::KRR: return detail::train_krr(spec, data);
    case LearnerKind::SVM: return detail::train_svm(spec, data);
    case LearnerKind::SVR: return detail::train_svr(spec, data);
    case LearnerKind::EntropyMixture: return detail::train_entropy(spec, data);
  }
  throw std::invalid_argument("unknown learner kind");
}

// Probe labels used when taking the sup over z = (x, y) empirically.
inline std::vector<double> probe_labels(const KernelLearnerSpec& spec) {
  if (spec.kind == LearnerKind::SVM) return {-1.0, 1.0};
  std::vector<double> ys;
  for (int i = 0; i <= 4; ++i) ys.push_back(spec.B * i / 4.0);
  return ys;
}

struct StabilityMeasurement {
  double max_deviation = 0.0;
  std::vector<double> per_perturbation;
};

// Empirical (lower-bound) estimate of the uniform stability coefficient:
// replace a random training point by a fresh stationary draw, retrain, and
// take the max cost deviation over a probe grid of inputs and labels.
inline StabilityMeasurement measure_stability(
    const KernelLearnerSpec& spec, const LabeledSequence& data,
    const MarkovChainModel& chain, const LabelingRule& rule, long n_perturbations,
    long probe_points, std::uint64_t seed) {
  if (n_perturbations < 1) throw std::invalid_argument("need n_perturbations >= 1");
  if (probe_points < 1) throw std::invalid_argument("need probe_points >= 1");
  const TrainedModel base = train(spec, data);

  Rng probe_rng(derive_seed(seed, 0x9e0b));
  std::vector<std::vector<double>> probe_x;
  probe_x.reserve(static_cast<std::size_t>(probe_points));
  for (long i = 0; i < probe_points; ++i)
    probe_x.push_back(stationary_draw(chain, rule, probe_rng).first);
  const std::vector<double> probe_y = probe_labels(spec);

  StabilityMeasurement out;
  out.per_perturbation.reserve(static_cast<std::size_t>(n_perturbations));
  for (long p = 0; p < n_perturbations; ++p) {
    Rng rng(derive_seed(seed, 0x7e57, static_cast<std::uint64_t>(p)));
    const std::size_t idx =
        static_cast<std::size_t>(rng.uniform_index(static_cast<std::uint64_t>(data.size())));
    auto [x_new, y_new] = stationary_draw(chain, rule, rng);
    LabeledSequence perturbed = data;
    perturbed.inputs[idx] = std::move(x_new);
    perturbed.labels[idx] = y_new;
    const TrainedModel alt = train(spec, perturbed);

    double dev = 0.0;
    for (const auto& x : probe_x)
      for (double y : probe_y)
        dev = std::max(dev, std::fabs(cost(base, x, y) - cost(alt, x, y)));
    out.per_perturbation.push_back(dev);
    out.max_deviation = std::max(out.max_deviation, dev);
  }
  return out;
}

}  // namespace mixbound
