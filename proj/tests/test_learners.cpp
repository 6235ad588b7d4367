#include <doctest.h>

#include <cmath>
#include <vector>

#include "mixbound/learners.hpp"
#include "mixbound/linalg.hpp"
#include "mixbound/sequence.hpp"
#include "oracles.hpp"

using namespace mixbound;
using mixbound_test::grid_best_primal;
using mixbound_test::primal_objective;

namespace {

LabeledSequence make_sequence(const std::vector<std::vector<double>>& x,
                              const std::vector<double>& y, double bound = 1.0) {
  LabeledSequence s;
  s.inputs = x;
  s.labels = y;
  s.hidden_states.assign(y.size(), 0);
  s.output_bound = bound;
  return s;
}

struct Fixture {
  MarkovChainModel chain = MarkovChainModel::two_state(0.2, 0.4);
  LabelingRule reg_rule = LabelingRule::regression({0.25, 0.75}, 2, 1.0, 0.05);
  LabelingRule sign_rule = LabelingRule::sign({-1.0, 1.0}, 2, 0.1);
};

}  // namespace

TEST_CASE("KRR with a single point solves (1 + lambda m) alpha = y by hand") {
  KernelLearnerSpec spec;
  spec.kind = LearnerKind::KRR;
  spec.lambda = 1.0;
  spec.kernel = Kernel::linear(1.0);
  const LabeledSequence data = make_sequence({{1.0}}, {0.8});
  const TrainedModel model = train(spec, data);
  CHECK(model.dual_coefficients[0] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(predict(model, {1.0}) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(cost(model, {1.0}, 0.4) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("KRR normal equations are solved to tight residual") {
  Fixture fx;
  KernelLearnerSpec spec;
  spec.kind = LearnerKind::KRR;
  spec.lambda = 0.5;
  spec.kernel = Kernel::rbf(1.0);
  const LabeledSequence data = generate(fx.chain, fx.reg_rule, 60, 17);
  const TrainedModel model = train(spec, data);
  CHECK(model.krr_residual_inf <= 1e-10);
}

TEST_CASE("SVM separates a two-point set with zero hinge loss") {
  KernelLearnerSpec spec;
  spec.kind = LearnerKind::SVM;
  spec.lambda = 1e-3;
  spec.kernel = Kernel::linear(2.0);
  const LabeledSequence data = make_sequence({{2.0}, {-2.0}}, {1.0, -1.0});
  const TrainedModel model = train(spec, data);
  CHECK(model.converged);
  CHECK(cost_hinge_capped(predict(model, {2.0}), 1.0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(cost_hinge_capped(predict(model, {-2.0}), -1.0) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("heavy regularization shrinks predictions toward zero") {
  Fixture fx;
  KernelLearnerSpec spec;
  spec.kind = LearnerKind::KRR;
  spec.lambda = 1e6;
  spec.kernel = Kernel::rbf(1.0);
  const LabeledSequence data = generate(fx.chain, fx.reg_rule, 40, 5);
  const TrainedModel model = train(spec, data);
  const double cap = model.output_bound();  // kappa sqrt(B^2/lambda) = 1e-3
  CHECK(cap == doctest::Approx(1e-3).epsilon(1e-12));
  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    const auto probe = stationary_draw(fx.chain, fx.reg_rule, rng);
    CHECK(std::fabs(predict(model, probe.first)) <= cap + 1e-9);
  }
}

TEST_CASE("certificates match the closed forms") {
  KernelLearnerSpec svm;
  svm.kind = LearnerKind::SVM;
  svm.lambda = 1.0;
  svm.kernel = Kernel::rbf(1.0);
  const StabilityCertificate c1 = certify_stability(svm, 10);
  CHECK(c1.beta_hat == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(c1.M == doctest::Approx(1.0).epsilon(1e-12));

  KernelLearnerSpec krr;
  krr.kind = LearnerKind::KRR;
  krr.lambda = 0.5;
  krr.kernel = Kernel::rbf(1.0);
  krr.B = 1.0;
  const StabilityCertificate c2 = certify_stability(krr, 100);
  CHECK(c2.beta_hat == doctest::Approx(0.08).epsilon(1e-12));
  CHECK(c2.M == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(c2.sigma == doctest::Approx(2.0).epsilon(1e-12));

  KernelLearnerSpec ent;
  ent.kind = LearnerKind::EntropyMixture;
  ent.lambda = 1.0;
  ent.B = 1.0;
  ent.entropy_M = 2.0;
  const StabilityCertificate c3 = certify_stability(ent, 4);
  CHECK(c3.beta_hat == doctest::Approx(1.0).epsilon(1e-12));

  KernelLearnerSpec svr;
  svr.kind = LearnerKind::SVR;
  svr.lambda = 2.0;
  svr.kernel = Kernel::rbf(1.0);
  svr.B = 1.0;
  const StabilityCertificate c4 = certify_stability(svr, 50);
  CHECK(c4.beta_hat == doctest::Approx(1.0 / 100.0).epsilon(1e-12));
  CHECK(c4.M == doctest::Approx(std::sqrt(0.5) + 1.0).epsilon(1e-12));
}

TEST_CASE("cost functions follow the case definitions") {
  CHECK(cost_eps_insensitive(0.5, 0.6, 0.1) == doctest::Approx(0.0));
  CHECK(cost_eps_insensitive(0.5, 0.75, 0.1) == doctest::Approx(0.15));
  CHECK(cost_hinge_capped(-0.5, 1.0) == doctest::Approx(1.0));
  CHECK(cost_hinge_capped(0.5, 1.0) == doctest::Approx(0.5));
  CHECK(cost_hinge_capped(1.5, 1.0) == doctest::Approx(0.0));
  CHECK(cost_hinge_capped(-2.0, -1.0) == doctest::Approx(0.0));
  CHECK(cost_squared(0.3, 0.3) == doctest::Approx(0.0));
}

TEST_CASE("solver reaches the grid-oracle optimum on tiny instances") {
  Fixture fx;
  for (LearnerKind kind : {LearnerKind::SVM, LearnerKind::SVR}) {
    KernelLearnerSpec spec;
    spec.kind = kind;
    spec.lambda = 0.25;
    spec.kernel = Kernel::rbf(0.7);
    spec.epsilon_tube = 0.05;
    const LabeledSequence data =
        generate(fx.chain, kind == LearnerKind::SVM ? fx.sign_rule : fx.reg_rule, 5,
                 kind == LearnerKind::SVM ? 23 : 29);
    const TrainedModel model = train(spec, data);
    const Matrix gram = gram_matrix(spec.kernel, data.inputs);
    const double primal_solver =
        primal_objective(spec, gram, model.dual_coefficients, data.labels);
    const double primal_grid = grid_best_primal(spec, data, 13);
    CHECK(primal_solver <= primal_grid + 1e-4);
  }
}

TEST_CASE("admissibility: cost is sigma-Lipschitz in the predicted value") {
  Fixture fx;
  Rng rng(77);
  // hinge and eps-insensitive are 1-admissible unconditionally
  for (int rep = 0; rep < 200; ++rep) {
    const double a = rng.uniform(-3.0, 3.0);
    const double b = rng.uniform(-3.0, 3.0);
    const double y_sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    CHECK(std::fabs(cost_hinge_capped(a, y_sign) - cost_hinge_capped(b, y_sign)) <=
          std::fabs(a - b) + 1e-12);
    const double y = rng.uniform(0.0, 1.0);
    CHECK(std::fabs(cost_eps_insensitive(a, y, 0.1) - cost_eps_insensitive(b, y, 0.1)) <=
          std::fabs(a - b) + 1e-12);
  }
  // squared cost is 2B-admissible on the bounded hypothesis set; realize two
  // models and verify on probes, asserting the premise (predictions in [0, B])
  KernelLearnerSpec spec;
  spec.kind = LearnerKind::KRR;
  spec.lambda = 1.0;
  spec.kernel = Kernel::rbf(1.0);
  const TrainedModel h1 = train(spec, generate(fx.chain, fx.reg_rule, 30, 7));
  const TrainedModel h2 = train(spec, generate(fx.chain, fx.reg_rule, 30, 8));
  for (int rep = 0; rep < 200; ++rep) {
    const auto probe = stationary_draw(fx.chain, fx.reg_rule, rng);
    const double p1 = predict(h1, probe.first);
    const double p2 = predict(h2, probe.first);
    REQUIRE(p1 >= 0.0);
    REQUIRE(p1 <= spec.B);
    REQUIRE(p2 >= 0.0);
    REQUIRE(p2 <= spec.B);
    CHECK(std::fabs(cost_squared(p1, probe.second) - cost_squared(p2, probe.second)) <=
          2.0 * spec.B * std::fabs(p1 - p2) + 1e-12);
  }
}

TEST_CASE("measured stability stays below the certificate") {
  Fixture fx;
  for (LearnerKind kind : {LearnerKind::KRR, LearnerKind::SVR, LearnerKind::SVM,
                           LearnerKind::EntropyMixture}) {
    KernelLearnerSpec spec;
    spec.kind = kind;
    spec.lambda = 1.0;
    spec.kernel = Kernel::rbf(1.0);
    spec.epsilon_tube = 0.05;
    const bool sign = kind == LearnerKind::SVM;
    const LabeledSequence data =
        generate(fx.chain, sign ? fx.sign_rule : fx.reg_rule, 40, 13);
    const StabilityCertificate cert = certify_stability(spec, data.size(), 1.0);
    const StabilityMeasurement meas = measure_stability(
        spec, data, fx.chain, sign ? fx.sign_rule : fx.reg_rule, 25, 32, 91);
    CHECK(meas.max_deviation <= cert.beta_hat + 1e-9);
  }
}

TEST_CASE("replacing a point with itself changes nothing") {
  Fixture fx;
  KernelLearnerSpec spec;
  spec.kind = LearnerKind::SVR;
  spec.lambda = 0.5;
  spec.kernel = Kernel::rbf(1.0);
  const LabeledSequence data = generate(fx.chain, fx.reg_rule, 20, 3);
  const TrainedModel base = train(spec, data);
  LabeledSequence copy = data;
  copy.inputs[7] = data.inputs[7];
  copy.labels[7] = data.labels[7];
  const TrainedModel again = train(spec, copy);
  Rng rng(4);
  double dev = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto probe = stationary_draw(fx.chain, fx.reg_rule, rng);
    for (double y : probe_labels(spec))
      dev = std::max(dev, std::fabs(cost(base, probe.first, y) - cost(again, probe.first, y)));
  }
  CHECK(dev == 0.0);
}

TEST_CASE("measured KRR stability scales like 1/m") {
  Fixture fx;
  KernelLearnerSpec spec;
  spec.kind = LearnerKind::KRR;
  spec.lambda = 1.0;
  spec.kernel = Kernel::rbf(1.0);
  std::vector<double> log_m, log_dev;
  for (long m : {50L, 100L, 200L, 400L}) {
    const LabeledSequence data = generate(fx.chain, fx.reg_rule, m, 101);
    const StabilityMeasurement meas =
        measure_stability(spec, data, fx.chain, fx.reg_rule, 30, 40, 55);
    log_m.push_back(std::log(static_cast<double>(m)));
    log_dev.push_back(std::log(meas.max_deviation));
  }
  const double slope = fit_slope(log_m, log_dev);
  CHECK(slope == doctest::Approx(-1.0).epsilon(0.3));
}

TEST_CASE("entropy mixture solves the Gibbs form exactly") {
  KernelLearnerSpec spec;
  spec.kind = LearnerKind::EntropyMixture;
  spec.lambda = 0.5;
  spec.n_theta = 21;
  const LabeledSequence data =
      make_sequence({{0.0}, {0.0}, {0.0}, {0.0}}, {0.4, 0.5, 0.6, 0.5});
  const TrainedModel model = train(spec, data);
  double mass = 0.0;
  for (double w : model.dual_coefficients) mass += w;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  // Gibbs weights follow exp(-avg loss / lambda): check one ratio by hand
  double loss_mid = 0.0, loss_far = 0.0;
  for (double y : data.labels) {
    loss_mid += std::fabs(0.5 - y) / 4.0;
    loss_far += std::fabs(0.0 - y) / 4.0;
  }
  const double expected_ratio = std::exp(-(loss_far - loss_mid) / spec.lambda);
  CHECK(model.dual_coefficients[0] / model.dual_coefficients[10] ==
        doctest::Approx(expected_ratio).epsilon(1e-10));
  const double p = predict(model, {0.0});
  CHECK(p >= 0.0);
  CHECK(p <= 1.0);
}

TEST_CASE("polynomial kernel trains with a data-derived kappa") {
  Fixture fx;
  KernelLearnerSpec spec;
  spec.kind = LearnerKind::KRR;
  spec.lambda = 1.0;
  spec.kernel = Kernel::polynomial(2, 1.0);
  const LabeledSequence data = generate(fx.chain, fx.reg_rule, 30, 41);
  const TrainedModel model = train(spec, data);
  CHECK(model.krr_residual_inf <= 1e-10);
  // kappa is the max of sqrt(K(x,x)) over the training inputs
  double k2 = 0.0;
  for (const auto& x : data.inputs) k2 = std::max(k2, spec.kernel.eval(x, x));
  CHECK(model.kappa == doctest::Approx(std::sqrt(k2)).epsilon(1e-12));
  CHECK(spec.kernel.eval({1.0, 0.0}, {2.0, 0.0}) == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("training rejects invalid setups") {
  KernelLearnerSpec spec;
  spec.kind = LearnerKind::SVM;
  spec.kernel = Kernel::rbf(1.0);
  const LabeledSequence bad = make_sequence({{0.1}, {0.2}}, {0.3, 1.0});
  CHECK_THROWS_AS(train(spec, bad), std::invalid_argument);

  KernelLearnerSpec neg;
  neg.kind = LearnerKind::KRR;
  neg.lambda = 0.0;
  const LabeledSequence data = make_sequence({{0.1}}, {0.5});
  CHECK_THROWS_AS(train(neg, data), std::invalid_argument);

  KernelLearnerSpec declared;
  declared.kind = LearnerKind::KRR;
  declared.kernel = Kernel::linear(0.5);  // kappa too small for this input
  const LabeledSequence big = make_sequence({{2.0}}, {0.5});
  CHECK_THROWS_AS(train(declared, big), std::invalid_argument);
}
