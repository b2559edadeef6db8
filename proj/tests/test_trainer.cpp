#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "socnav/gradcheck.hpp"
#include "socnav/losses.hpp"
#include "socnav/trainer.hpp"

using namespace socnav;
using nn::Matrix;
using nn::Tensor;

namespace {

Dataset synthetic_dataset(int n, int H, std::uint64_t seed = 21) {
  Rng rng(seed);
  Dataset d;
  d.header.H = H;
  for (int i = 0; i < n; ++i) {
    Transition t;
    t.state = random_model_state(rng, static_cast<int>(rng.below(3)));
    for (int k = 0; k < H; ++k) {
      t.chunk.push_back(rng.uniform(0.0, 1.0));
      t.chunk.push_back(rng.uniform(-1.0, 1.0));
    }
    t.path_index = omega_bins(t.chunk, 1.0).path_index;
    d.transitions.push_back(t);
  }
  return d;
}

TrainConfig tiny_config() {
  TrainConfig c;
  c.batch_size = 4;
  c.total_steps = 40;
  c.perturb_period = 10;
  c.decay_onset = 20;
  c.lr = 1e-3;
  c.log_every = 1;
  c.policy.d_pt = 4;
  c.policy.d_ha = 8;
  c.policy.gru_hidden = 4;
  c.policy.pt_hidden = 8;
  c.policy.head_hidden = 16;
  return c;
}

double constant_validator(const PolicyNet&) { return 0.0; }

}  // namespace

TEST(Losses, DiscreteUniformIsLog25) {
  const Tensor logits = Tensor::constant(Matrix::Zero(1, 25));
  EXPECT_NEAR(loss_discrete(logits, {7}).item(), std::log(25.0), 1e-12);
}

TEST(Losses, DiscreteConfidentIsNearZero) {
  Matrix l = Matrix::Zero(1, 25);
  l(0, 3) = 20.0;
  const double loss = loss_discrete(Tensor::constant(l), {3}).item();
  EXPECT_GE(loss, 0.0);
  EXPECT_LT(loss, 1e-7);
  l(0, 3) = 40.0;
  EXPECT_LT(loss_discrete(Tensor::constant(l), {3}).item(), 1e-8);
}

TEST(Losses, DiscreteAveragesBatch) {
  Matrix l(2, 3);
  l << 1.0, 2.0, 3.0, 0.5, -1.0, 0.0;
  const double a = loss_discrete(Tensor::constant(l.topRows(1)), {0}).item();
  const double b = loss_discrete(Tensor::constant(l.bottomRows(1)), {2}).item();
  EXPECT_NEAR(loss_discrete(Tensor::constant(l), {0, 2}).item(), 0.5 * (a + b), 1e-12);
}

TEST(Losses, ContinuousExamples) {
  Matrix target(1, 6);
  target << 0.5, 0.1, 0.2, -0.3, 0.9, 0.0;
  EXPECT_DOUBLE_EQ(loss_continuous(Tensor::constant(target), target).item(), 0.0);
  Matrix pred = target;
  pred(0, 0) += 0.5;
  EXPECT_NEAR(loss_continuous(Tensor::constant(pred), target).item(), 0.25, 1e-12);
  pred(0, 0) += 0.5;
  EXPECT_NEAR(loss_continuous(Tensor::constant(pred), target).item(), 1.0, 1e-12);
}

TEST(Losses, HybridZeroAtExactConfidentPrediction) {
  const int P = 27, two_h = 6;
  Matrix logits = Matrix::Constant(1, P, -1e4);
  logits(0, 13) = 0.0;
  Matrix target(1, two_h);
  target << 0.5, 0.0, 0.4, 0.1, 0.3, -0.2;
  Matrix chunks(1, P * two_h);
  for (int j = 0; j < P; ++j) chunks.block(0, j * two_h, 1, two_h) = target.array() + 0.3 * j;
  chunks.block(0, 13 * two_h, 1, two_h) = target;
  EXPECT_EQ(loss_hybrid(Tensor::constant(logits), Tensor::constant(chunks), target, {13}, 1.0).item(), 0.0);
}

TEST(Losses, HybridUniform27IsLog27) {
  Matrix target(1, 6);
  target << 0.5, 0.0, 0.4, 0.1, 0.3, -0.2;
  Matrix chunks(1, 27 * 6);
  for (int j = 0; j < 27; ++j) chunks.block(0, j * 6, 1, 6) = target;
  const double loss = loss_hybrid(Tensor::constant(Matrix::Zero(1, 27)), Tensor::constant(chunks), target, {4}, 1.0).item();
  EXPECT_NEAR(loss, std::log(27.0), 1e-9);
}

TEST(Losses, HybridHandEvaluation) {
  Matrix target(1, 2);
  target << 0.5, 0.0;
  Matrix chunks(1, 3 * 2);
  chunks << 0.5, 0.0, 1.5, 0.0, 0.5, 2.0;  // squared residuals 0, 1, 4
  const double loss = loss_hybrid(Tensor::constant(Matrix::Zero(1, 3)), Tensor::constant(chunks), target, {0}, 1.0).item();
  EXPECT_NEAR(loss, std::log(3.0) + 5.0 / 3.0, 1e-12);
  EXPECT_NEAR(loss, 2.7653, 1e-4);
}

TEST(Losses, HybridNonNegative) {
  Rng rng(30);
  for (int i = 0; i < 200; ++i) {
    Matrix logits(2, 9), chunks(2, 9 * 4), target(2, 4);
    for (Matrix* m : {&logits, &chunks, &target}) {
      for (Eigen::Index k = 0; k < m->size(); ++k) m->data()[k] = rng.uniform(-5, 5);
    }
    const std::vector<int> idx{static_cast<int>(rng.below(9)), static_cast<int>(rng.below(9))};
    EXPECT_GE(loss_hybrid(Tensor::constant(logits), Tensor::constant(chunks), target, idx, rng.uniform(0, 3)).item(), 0.0);
  }
}

TEST(Perturb, MixFormula) {
  nn::ParamStore s;
  s.add("w", 2, 3, nn::Init::xavier);
  s.entries()[0].tensor.mutable_value().setOnes();
  Rng a(5), b(5);
  const Matrix fresh = s.sample_initial(a)[0];
  perturb_weights(s, b, 0.3);
  EXPECT_LT((s.get("w").value() - (0.7 * Matrix::Ones(2, 3) + 0.3 * fresh)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Perturb, ZeroRandomNetwork) {
  nn::ParamStore s;
  s.add("b", 1, 4, nn::Init::zeros);
  s.entries()[0].tensor.mutable_value().setOnes();
  Rng rng(1);
  perturb_weights(s, rng, 0.3);
  EXPECT_EQ(s.get("b").value(), Matrix::Constant(1, 4, 0.7));
}

TEST(Perturb, EndpointsAndMomentReset) {
  nn::ParamStore s;
  s.add("w", 3, 3, nn::Init::xavier);
  Rng init(2);
  s.initialize(init);
  s.entries()[0].m.setConstant(0.5);
  s.entries()[0].v.setConstant(0.5);
  s.adam_steps = 17;
  const Matrix before = s.get("w").value();
  Rng r0(3);
  perturb_weights(s, r0, 0.0);
  EXPECT_EQ(s.get("w").value(), before);
  EXPECT_EQ(s.entries()[0].m, Matrix::Zero(3, 3));
  EXPECT_EQ(s.entries()[0].v, Matrix::Zero(3, 3));
  EXPECT_EQ(s.adam_steps, 0);
  Rng r1(4), r1_copy(4);
  perturb_weights(s, r1, 1.0);
  EXPECT_EQ(s.get("w").value(), s.sample_initial(r1_copy)[0]);
  Rng r2(4);
  EXPECT_THROW(perturb_weights(s, r2, 1.5), std::invalid_argument);
}

TEST(Schedule, UnitScale) {
  const TrainConfig c;
  EXPECT_NEAR(*perturb_schedule(50'000, c), 0.3, 1e-15);
  EXPECT_NEAR(*perturb_schedule(750'000, c), 0.3, 1e-15);
  EXPECT_NEAR(*perturb_schedule(800'000, c), 0.27, 1e-15);
  EXPECT_NEAR(*perturb_schedule(850'000, c), 0.3 * 0.81, 1e-15);
  EXPECT_FALSE(perturb_schedule(49'999, c).has_value());
  EXPECT_FALSE(perturb_schedule(0, c).has_value());
}

TEST(Schedule, ScaledRunsFireAtSameFractions) {
  TrainConfig full, desk;
  desk.scale = 0.1;
  EXPECT_EQ(desk.scaled_total(), 200'000);
  EXPECT_EQ(desk.scaled_period(), 5'000);
  EXPECT_EQ(desk.scaled_onset(), 75'000);
  for (std::int64_t s = 1; s <= full.scaled_total(); s += 997) {
    const auto a = perturb_schedule(s, full);
    EXPECT_FALSE(a && s % 10 != 0);
  }
  for (std::int64_t k = 1; k <= 40; ++k) {
    const auto a = perturb_schedule(k * 50'000, full);
    const auto b = perturb_schedule(k * 5'000, desk);
    ASSERT_TRUE(a && b);
    EXPECT_DOUBLE_EQ(*a, *b);
  }
}

TEST(TrainConfigTest, JsonRoundTrip) {
  TrainConfig c = tiny_config();
  c.optimizer = nn::OptimizerKind::adam;
  c.flip_aug = false;
  c.policy.head_kind = HeadKind::continuous;
  c.validation_scenarios = {1, 4};
  c.seed = 99;
  const TrainConfig back = train_config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_EQ(config_hash(back), config_hash(c));
  EXPECT_NE(config_hash(c), config_hash(tiny_config()));
}

TEST(TrainConfigTest, UnknownKeyAndBadValues) {
  EXPECT_THROW(train_config_from_json(R"({"learning_rate": 0.1})"), std::invalid_argument);
  TrainConfig c;
  c.scale = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = TrainConfig{};
  c.decay_onset = 760'000;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_EQ(train_config_from_json(R"({"H": 1, "head_kind": "discrete25"})").policy.head_kind, HeadKind::discrete25);
}

TEST(Train, ZeroStepsValidatesOnce) {
  TrainConfig c = tiny_config();
  c.total_steps = 0;
  int calls = 0;
  const TrainResult r = train(c, synthetic_dataset(8, 3), [&](const PolicyNet&) { return ++calls, 1.5; });
  EXPECT_EQ(calls, 1);
  EXPECT_TRUE(r.losses.empty());
  EXPECT_EQ(r.best_step, 0);
  EXPECT_EQ(r.best_score, 1.5);

  PolicyNet fresh(c.policy);
  Rng init(derive_seed({c.seed, 1}));
  fresh.params().initialize(init);
  EXPECT_EQ(r.best_params, fresh.params().snapshot());
}

TEST(Train, DatasetMismatchFailsEarly) {
  TrainConfig c = tiny_config();
  EXPECT_THROW(train(c, synthetic_dataset(4, 1), constant_validator), std::invalid_argument);
  EXPECT_THROW(train(c, Dataset{}, constant_validator), std::invalid_argument);
  c.policy.H = 1;
  EXPECT_NO_THROW(train(c, synthetic_dataset(4, 3), constant_validator));
}

TEST(Train, DeterministicLosses) {
  const Dataset d = synthetic_dataset(16, 3);
  const TrainConfig c = tiny_config();
  const TrainResult a = train(c, d, constant_validator);
  const TrainResult b = train(c, d, constant_validator);
  ASSERT_EQ(a.losses.size(), 40u);
  EXPECT_EQ(a.losses, b.losses);
  EXPECT_EQ(a.best_params, b.best_params);
  TrainConfig other = c;
  other.seed = 1;
  EXPECT_NE(train(other, d, constant_validator).losses, a.losses);
}

TEST(Train, LossDecreasesOnFixedBatch) {
  TrainConfig c = tiny_config();
  c.total_steps = 150;
  c.perturb = false;
  c.reset_to_best = false;
  c.flip_aug = false;
  c.batch_size = 8;
  const TrainResult r = train(c, synthetic_dataset(8, 3), constant_validator);
  double early = 0.0, late = 0.0;
  for (int i = 0; i < 10; ++i) {
    early += r.losses[static_cast<std::size_t>(i)];
    late += r.losses[r.losses.size() - 1 - static_cast<std::size_t>(i)];
  }
  EXPECT_LT(late, 0.8 * early);
}

TEST(Train, ValidationScheduleAndBestCheckpoint) {
  TrainConfig c = tiny_config();
  const std::vector<double> scores{0.0, 2.0, 1.0, 5.0, 3.0};
  std::size_t call = 0;
  std::ostringstream log;
  const TrainResult r = train(c, synthetic_dataset(8, 3), [&](const PolicyNet&) { return scores.at(call++); }, {&log});
  ASSERT_EQ(r.validations.size(), 5u);
  const std::vector<std::int64_t> steps{0, 10, 20, 30, 40};
  double best = -1e300;
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(r.validations[i].step, steps[i]);
    best = std::max(best, r.validations[i].score);
  }
  EXPECT_EQ(r.best_score, 5.0);
  EXPECT_EQ(r.best_step, 30);
  // Perturbations at 10, 20 and 30; decayed once past the onset at 20.
  EXPECT_NEAR(*r.validations[1].mix_applied, 0.3, 1e-15);
  EXPECT_NEAR(*r.validations[3].mix_applied, 0.27, 1e-15);
  EXPECT_FALSE(r.validations[4].mix_applied.has_value());
  EXPECT_NE(log.str().find("\"mix_applied\""), std::string::npos);
  EXPECT_NE(log.str().find("\"val_score\""), std::string::npos);
}

TEST(Train, ResetToBestRestoresWeights) {
  TrainConfig c = tiny_config();
  c.total_steps = 20;
  c.perturb = false;
  // The score at step 10 is worse than at step 0, so training resumes from
  // the initial weights; the first post-reset step starts from them again.
  std::vector<Matrix> seen_at_10;
  std::vector<Matrix> initial;
  std::size_t call = 0;
  train(c, synthetic_dataset(8, 3), [&](const PolicyNet& net) {
    if (call == 0) initial = net.params().snapshot();
    if (call == 1) seen_at_10 = net.params().snapshot();
    return call++ == 0 ? 1.0 : 0.0;
  });
  EXPECT_NE(seen_at_10, initial);

  TrainConfig no_reset = c;
  no_reset.reset_to_best = false;
  const Dataset d = synthetic_dataset(8, 3);
  std::size_t k = 0;
  const auto with = train(c, d, [&](const PolicyNet&) { return k++ == 0 ? 1.0 : 0.0; });
  k = 0;
  const auto without = train(no_reset, d, [&](const PolicyNet&) { return k++ == 0 ? 1.0 : 0.0; });
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(with.losses[i], without.losses[i]);
  EXPECT_NE(with.losses[10], without.losses[10]);
}

TEST(Train, FlipAugmentedLabelsAreSymmetric) {
  const Dataset d = synthetic_dataset(64, 3);
  double w_sum = 0.0, v_sum = 0.0, v_aug = 0.0;
  std::size_t n_aug = 0;
  for (const auto& t : d.transitions) {
    const Transition f = flip_augment(t, 1.0);
    for (std::size_t i = 0; i < t.chunk.size(); i += 2) {
      w_sum += t.chunk[i + 1] + f.chunk[i + 1];
      v_sum += t.chunk[i];
      v_aug += t.chunk[i] + f.chunk[i];
    }
    n_aug += 2;
  }
  EXPECT_EQ(n_aug, 2 * d.transitions.size());
  EXPECT_NEAR(w_sum, 0.0, 1e-12);
  EXPECT_NEAR(v_aug / static_cast<double>(n_aug), v_sum / static_cast<double>(d.transitions.size()), 1e-12);
}

TEST(Train, AllHeadsTrain) {
  for (HeadKind head : {HeadKind::continuous, HeadKind::discrete25}) {
    TrainConfig c = tiny_config();
    c.policy.head_kind = head;
    c.policy.H = head == HeadKind::discrete25 ? 1 : 3;
    c.total_steps = 5;
    const TrainResult r = train(c, synthetic_dataset(8, 3), constant_validator);
    ASSERT_EQ(r.losses.size(), 5u);
    for (double l : r.losses) EXPECT_TRUE(std::isfinite(l));
  }
}

TEST(Policy, SaveAndLoad) {
  TrainConfig c = tiny_config();
  c.seed = 31;
  PolicyNet net(c.policy);
  Rng rng(4);
  net.params().initialize(rng);
  const auto dir = std::filesystem::temp_directory_path() / "socnav_policy_test";
  std::filesystem::create_directories(dir);
  save_policy(net, c, 0.123456789012345678, 40, dir / "best.ckpt");
  const LoadedPolicy p = load_policy(dir / "best.ckpt");
  EXPECT_EQ(to_json(p.config), to_json(c));
  EXPECT_EQ(p.score, 0.123456789012345678);
  EXPECT_EQ(p.net.params().snapshot(), net.params().snapshot());
  std::filesystem::remove_all(dir);
}
