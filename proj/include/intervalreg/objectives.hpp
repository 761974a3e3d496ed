#pragma once

/// \file
/// Training objectives for interval targets.
///
///  - Projection: mean distance from f(x) to its interval.
///  - Minmax: mean loss against the worst point of the interval.
///  - MinmaxReg: gradient descent-ascent on
///      sum_i l(f(x_i), f'(x_i)) - lambda * sum_i proj(f'(x_i), l_i, u_i),
///    alternating one ascent step on the adversary f' with one descent step on f.
///  - PLMax / PLMean: k teachers are first trained with the projection
///    objective, then the student minimises the max (resp. mean) over teachers
///    of its loss against their predictions.
///  - PLEnsembleBaseline: student trained against the averaged teacher label.
///  - SupervisedMidpoint / SupervisedTrue: reference baselines.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "intervalreg/core.hpp"
#include "intervalreg/denoise.hpp"
#include "intervalreg/model.hpp"
#include "intervalreg/rng.hpp"

namespace intervalreg {

enum class ObjectiveKind {
  kProjection,
  kMinmax,
  kMinmaxReg,
  kPLMax,
  kPLMean,
  kPLEnsembleBaseline,
  kSupervisedMidpoint,
  kSupervisedTrue,
};

inline constexpr std::pair<ObjectiveKind, const char*> kObjectiveNames[] = {
    {ObjectiveKind::kProjection, "projection"},
    {ObjectiveKind::kMinmax, "minmax"},
    {ObjectiveKind::kMinmaxReg, "minmax_reg"},
    {ObjectiveKind::kPLMax, "pl_max"},
    {ObjectiveKind::kPLMean, "pl_mean"},
    {ObjectiveKind::kPLEnsembleBaseline, "pl_ensemble"},
    {ObjectiveKind::kSupervisedMidpoint, "supervised_midpoint"},
    {ObjectiveKind::kSupervisedTrue, "supervised_true"},
};

[[nodiscard]] inline std::string to_string(ObjectiveKind kind) {
  for (const auto& [k, name] : kObjectiveNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

[[nodiscard]] inline ObjectiveKind parse_objective_kind(const std::string& name) {
  for (const auto& [k, n] : kObjectiveNames) {
    if (name == n) return k;
  }
  throw ConfigError("unknown objective '" + name + "'");
}

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::kProjection;
  double loss_exponent = 1.0;
  double lambda = 1.0;                 ///< MinmaxReg regularization weight
  std::optional<double> adversary_lr;  ///< MinmaxReg; defaults to the learner's lr
  std::size_t k = 5;                   ///< teacher count for the PL variants

  [[nodiscard]] bool uses_teachers() const {
    return kind == ObjectiveKind::kPLMax || kind == ObjectiveKind::kPLMean ||
           kind == ObjectiveKind::kPLEnsembleBaseline;
  }

  void validate() const {
    (void)LossFamily(loss_exponent);
    if (loss_exponent > 8.0) throw ConfigError("loss exponent above 8 is not supported");
    if (kind == ObjectiveKind::kMinmaxReg && !(lambda > 0.0)) throw ConfigError("lambda must be positive");
    if (adversary_lr && !(*adversary_lr > 0.0)) throw ConfigError("adversary_lr must be positive");
    if (uses_teachers() && k == 0) throw ConfigError("pseudo-labeling needs k >= 1 teachers");
  }

  /// Name used in result tables, e.g. "pl_mean(k=5)" or "projection".
  [[nodiscard]] std::string label() const {
    std::string out = to_string(kind);
    if (uses_teachers() && k != 5) out += "(k=" + std::to_string(k) + ")";
    if (loss_exponent != 1.0) out += "[p=" + std::to_string(loss_exponent).substr(0, 4) + "]";
    return out;
  }
};

struct TrainConfig {
  std::size_t epochs = 1000;
  std::size_t batch_size = 512;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  /// Layer sizes, Lipschitz scale and power iterations. The init seed is
  /// taken from `seed`.
  MlpConfig model;

  void validate() const {
    if (epochs == 0 || batch_size == 0) throw ConfigError("epochs and batch_size must be >= 1");
    if (!(lr > 0.0)) throw ConfigError("learning rate must be positive");
    if (!model.layer_sizes.empty()) model.validate();
  }
};

struct TrainedModel {
  MlpConfig config;
  MlpParams params;
  ObjectiveSpec objective;
  /// Full-training-set objective after each epoch.
  std::vector<double> loss_trace;
  /// Training MAE against true targets after each epoch (empty when the
  /// dataset has none).
  std::vector<double> mae_trace;

  [[nodiscard]] FrozenNet net() const { return FrozenNet(params, config); }
  [[nodiscard]] double predict(std::span<const double> x) const { return net()(x); }
  [[nodiscard]] std::vector<double> predict(const FeatureMatrix& xs) const { return net().predict(xs); }
};

/// Optional hooks, used by tests to compare optimisation trajectories.
struct TrainObserver {
  std::function<void(std::size_t step, const MlpParams&)> on_step;
  std::function<void(std::size_t epoch, const MlpParams&)> on_epoch;
};

/// Teacher predictions: row j holds teacher j's outputs on `xs`.
using PseudoLabels = std::vector<std::vector<double>>;

[[nodiscard]] inline PseudoLabels make_pseudo_labels(std::span<const TrainedModel> teachers, const FeatureMatrix& xs) {
  if (teachers.empty()) throw DataError("no teacher models");
  PseudoLabels out;
  out.reserve(teachers.size());
  for (const auto& t : teachers) {
    if (t.config.input_dim() != xs.cols()) {
      throw DataError("teacher expects " + std::to_string(t.config.input_dim()) + " features, data has " +
                      std::to_string(xs.cols()));
    }
    out.push_back(t.predict(xs));
  }
  return out;
}

/// Per-batch loss callback: fills d(loss)/d(output) for each row in the batch
/// and returns the batch loss.
using BatchLoss =
    std::function<double(std::span<const std::size_t> rows, std::span<const double> outputs, std::span<double> dloss)>;

/// The batch loss of every objective that does not need a second trainable
/// model (all but MinmaxReg). `labels` is required for the PL variants.
[[nodiscard]] inline BatchLoss make_batch_loss(const ObjectiveSpec& spec, const IntervalDataset& ds,
                                               const PseudoLabels* labels = nullptr) {
  const LossFamily family(spec.loss_exponent);
  auto per_sample = [&ds, family](auto&& target_of) -> BatchLoss {
    return [&ds, family, target_of](std::span<const std::size_t> rows, std::span<const double> yhat,
                                    std::span<double> dloss) {
      const double inv_n = 1.0 / static_cast<double>(rows.size());
      double total = 0.0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const LossSpec target = target_of(ds[rows[i]], rows[i]);
        total += sample_loss(family, yhat[i], target);
        dloss[i] = sample_loss_grad(family, yhat[i], target) * inv_n;
      }
      return total * inv_n;
    };
  };

  switch (spec.kind) {
    case ObjectiveKind::kProjection:
      return per_sample([](const IntervalSample& s, std::size_t) -> LossSpec { return ProjectionTarget{s.interval}; });
    case ObjectiveKind::kMinmax:
      return per_sample([](const IntervalSample& s, std::size_t) -> LossSpec { return WorstCaseTarget{s.interval}; });
    case ObjectiveKind::kSupervisedMidpoint:
      return per_sample(
          [](const IntervalSample& s, std::size_t) -> LossSpec { return PointTarget{s.interval.midpoint()}; });
    case ObjectiveKind::kSupervisedTrue:
      if (!ds.has_true_targets()) throw DataError("supervised_true needs true targets on every row");
      return per_sample([](const IntervalSample& s, std::size_t) -> LossSpec { return PointTarget{*s.true_y}; });
    case ObjectiveKind::kMinmaxReg:
      throw ConfigError("minmax_reg has no single-model batch loss");
    default:
      break;
  }

  if (labels == nullptr || labels->empty()) throw ConfigError(to_string(spec.kind) + " needs teacher labels");
  for (const auto& row : *labels) {
    if (row.size() != ds.size()) throw DataError("pseudo-label row length does not match the dataset");
  }
  const PseudoLabels& pl = *labels;
  const auto k = static_cast<double>(pl.size());

  switch (spec.kind) {
    case ObjectiveKind::kPLMean:
      return [&pl, family, k](std::span<const std::size_t> rows, std::span<const double> yhat,
                                  std::span<double> dloss) {
        const double inv_n = 1.0 / static_cast<double>(rows.size());
        double total = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          double loss = 0.0;
          double grad = 0.0;
          for (const auto& teacher : pl) {
            loss += psi_loss(family, yhat[i], teacher[rows[i]]);
            grad += psi_loss_grad(family, yhat[i], teacher[rows[i]]);
          }
          total += loss / k;
          dloss[i] = grad / k * inv_n;
        }
        return total * inv_n;
      };
    case ObjectiveKind::kPLMax:
      // Max over teachers of the batch mean; the gradient is that of the
      // maximising teacher (first one on ties).
      return [&pl, family](std::span<const std::size_t> rows, std::span<const double> yhat, std::span<double> dloss) {
        const double inv_n = 1.0 / static_cast<double>(rows.size());
        double best = -1.0;
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < pl.size(); ++j) {
          double total = 0.0;
          for (std::size_t i = 0; i < rows.size(); ++i) total += psi_loss(family, yhat[i], pl[j][rows[i]]);
          if (total * inv_n > best) {
            best = total * inv_n;
            best_j = j;
          }
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
          dloss[i] = psi_loss_grad(family, yhat[i], pl[best_j][rows[i]]) * inv_n;
        }
        return best;
      };
    case ObjectiveKind::kPLEnsembleBaseline: {
      auto averaged = std::make_shared<std::vector<double>>(ds.size(), 0.0);
      for (std::size_t r = 0; r < ds.size(); ++r) {
        for (const auto& teacher : pl) (*averaged)[r] += teacher[r];
        (*averaged)[r] /= k;
      }
      return [averaged, family](std::span<const std::size_t> rows, std::span<const double> yhat,
                                std::span<double> dloss) {
        const double inv_n = 1.0 / static_cast<double>(rows.size());
        double total = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          const double target = (*averaged)[rows[i]];
          total += psi_loss(family, yhat[i], target);
          dloss[i] = psi_loss_grad(family, yhat[i], target) * inv_n;
        }
        return total * inv_n;
      };
    }
    default:
      throw ConfigError("unhandled objective");
  }
}

/// Loss terms of the MinmaxReg game on a batch, given both models' outputs.
struct MinmaxRegTerms {
  double pair_loss = 0.0;       ///< mean l(f, f')
  double regularizer = 0.0;     ///< lambda * mean proj(f', l, u), always >= 0
  [[nodiscard]] double adversary_objective() const { return pair_loss - regularizer; }
};

[[nodiscard]] inline MinmaxRegTerms minmax_reg_terms(const ObjectiveSpec& spec, const IntervalDataset& ds,
                                                     std::span<const std::size_t> rows,
                                                     std::span<const double> learner_out,
                                                     std::span<const double> adversary_out) {
  const LossFamily family(spec.loss_exponent);
  MinmaxRegTerms t;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    t.pair_loss += psi_loss(family, learner_out[i], adversary_out[i]);
    t.regularizer += projection_loss(family, adversary_out[i], ds[rows[i]].interval);
  }
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  t.pair_loss *= inv_n;
  t.regularizer *= spec.lambda * inv_n;
  return t;
}

/// Output-space loss callbacks of the two MinmaxReg players on one batch.
/// The adversary's is the negated game objective, so that descending it is
/// ascent on the game.
using OutputLoss = std::function<double(std::span<const double> outputs, std::span<double> dloss)>;

[[nodiscard]] inline OutputLoss minmax_reg_adversary_loss(const ObjectiveSpec& spec, const IntervalDataset& ds,
                                                          std::span<const std::size_t> rows,
                                                          std::span<const double> learner_out) {
  return [&spec, &ds, rows, learner_out](std::span<const double> adv_out, std::span<double> d) {
    const LossFamily family(spec.loss_exponent);
    const double inv_n = 1.0 / static_cast<double>(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double pair_grad = psi_loss_grad(family, adv_out[i], learner_out[i]);
      const double reg_grad = projection_loss_grad(family, adv_out[i], ds[rows[i]].interval);
      d[i] = -(pair_grad - spec.lambda * reg_grad) * inv_n;
    }
    return -minmax_reg_terms(spec, ds, rows, learner_out, adv_out).adversary_objective();
  };
}

[[nodiscard]] inline OutputLoss minmax_reg_learner_loss(const ObjectiveSpec& spec,
                                                        std::span<const double> adversary_out) {
  return [&spec, adversary_out](std::span<const double> out, std::span<double> d) {
    const LossFamily family(spec.loss_exponent);
    const double inv_n = 1.0 / static_cast<double>(out.size());
    double total = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      total += psi_loss(family, out[i], adversary_out[i]);
      d[i] = psi_loss_grad(family, out[i], adversary_out[i]) * inv_n;
    }
    return total * inv_n;
  };
}

namespace detail {

inline std::vector<double> outputs_on(const FrozenNet& net, const FeatureMatrix& xs, std::span<const std::size_t> rows) {
  std::vector<double> out(rows.size());
  std::vector<std::vector<double>> scratch;
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = net.forward(xs.row(rows[i]), scratch);
  return out;
}

inline double mae_against_truth(const std::vector<double>& predictions, const IntervalDataset& ds) {
  double total = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) total += std::fabs(predictions[i] - *ds[i].true_y);
  return total / static_cast<double>(ds.size());
}

inline void descend(MlpParams& params, const MlpConfig& cfg, AdamState& adam, const FeatureMatrix& xs,
                    std::span<const std::size_t> rows, const BatchLoss& loss, MlpGrads& grads) {
  if (cfg.lipschitz) power_iterate(params, cfg.power_iterations);
  batch_loss_and_grad(
      params, cfg, xs, rows,
      [&](std::span<const double> out, std::span<double> d) { return loss(rows, out, d); }, grads);
  adam_step(adam, params, grads);
}

/// Shuffled minibatch epochs. `step(rows)` performs the parameter update(s)
/// for one batch; `epoch_end(epoch)` records traces.
template <typename Step, typename EpochEnd>
void run_epochs(const TrainConfig& tc, std::size_t n, Step&& step, EpochEnd&& epoch_end) {
  CounterRng shuffle_rng(tc.seed, streams::kShuffle);
  std::vector<std::size_t> order(n);
  for (std::size_t epoch = 0; epoch < tc.epochs; ++epoch) {
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    shuffle(std::span<std::size_t>(order), shuffle_rng);
    for (std::size_t start = 0; start < n; start += tc.batch_size) {
      const std::size_t len = std::min(tc.batch_size, n - start);
      step(std::span<const std::size_t>(order.data() + start, len));
    }
    epoch_end(epoch);
  }
}

inline MlpConfig model_config_for(const TrainConfig& tc, std::size_t input_dim) {
  MlpConfig cfg = tc.model;
  if (cfg.layer_sizes.empty()) cfg.layer_sizes = MlpConfig::with_hidden(input_dim).layer_sizes;
  cfg.layer_sizes.front() = input_dim;
  cfg.init_seed = tc.seed;
  cfg.validate();
  return cfg;
}

}  // namespace detail

/// Trains a single model on a fixed batch loss (every objective except
/// MinmaxReg, with teacher labels already computed for the PL variants).
[[nodiscard]] inline TrainedModel train_with_loss(const ObjectiveSpec& spec, const TrainConfig& tc,
                                                  const IntervalDataset& ds, const BatchLoss& loss,
                                                  const TrainObserver& observer = {}) {
  tc.validate();
  TrainedModel model;
  model.objective = spec;
  model.config = detail::model_config_for(tc, ds.feature_dim());
  model.params = init_params(model.config);
  const FeatureMatrix xs = FeatureMatrix::from_dataset(ds);
  AdamState adam = AdamState::for_params(model.params, tc.lr);
  MlpGrads grads;
  std::vector<std::size_t> all(ds.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<double> scratch_grad(ds.size());
  const bool track_mae = ds.has_true_targets();

  std::size_t step_index = 0;
  detail::run_epochs(
      tc, ds.size(),
      [&](std::span<const std::size_t> rows) {
        detail::descend(model.params, model.config, adam, xs, rows, loss, grads);
        if (observer.on_step) observer.on_step(step_index, model.params);
        ++step_index;
      },
      [&](std::size_t epoch) {
        const auto predictions = FrozenNet(model.params, model.config).predict(xs);
        model.loss_trace.push_back(loss(all, predictions, scratch_grad));
        if (track_mae) model.mae_trace.push_back(detail::mae_against_truth(predictions, ds));
        if (observer.on_epoch) observer.on_epoch(epoch, model.params);
      });
  if (model.config.lipschitz) power_iterate(model.params, kExportPowerIterations);
  return model;
}

/// Gradient descent-ascent for MinmaxReg. Per batch: one Adam ascent step on
/// the adversary f' for mean l(f, f') - lambda mean proj(f'), then one Adam
/// descent step on f for mean l(f, f'). Both networks share the architecture;
/// the adversary is initialised from its own random stream.
[[nodiscard]] inline TrainedModel train_minmax_reg(const ObjectiveSpec& spec, const TrainConfig& tc,
                                                   const IntervalDataset& ds, const TrainObserver& observer = {}) {
  tc.validate();
  TrainedModel model;
  model.objective = spec;
  model.config = detail::model_config_for(tc, ds.feature_dim());
  model.params = init_params(model.config);
  MlpParams adversary = init_params(model.config, streams::kAdversaryInit);
  const FeatureMatrix xs = FeatureMatrix::from_dataset(ds);
  AdamState learner_adam = AdamState::for_params(model.params, tc.lr);
  AdamState adversary_adam = AdamState::for_params(adversary, spec.adversary_lr.value_or(tc.lr));
  MlpGrads grads;
  std::vector<std::size_t> all(ds.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const bool track_mae = ds.has_true_targets();
  const MlpConfig& cfg = model.config;

  std::size_t step_index = 0;
  detail::run_epochs(
      tc, ds.size(),
      [&](std::span<const std::size_t> rows) {
        if (cfg.lipschitz) power_iterate(model.params, cfg.power_iterations);
        const auto learner_out = detail::outputs_on(FrozenNet(model.params, cfg), xs, rows);

        // Ascent on the adversary: minimise the negated objective.
        if (cfg.lipschitz) power_iterate(adversary, cfg.power_iterations);
        batch_loss_and_grad(adversary, cfg, xs, rows, minmax_reg_adversary_loss(spec, ds, rows, learner_out), grads);
        adam_step(adversary_adam, adversary, grads);

        const auto adversary_out = detail::outputs_on(FrozenNet(adversary, cfg), xs, rows);
        batch_loss_and_grad(model.params, cfg, xs, rows, minmax_reg_learner_loss(spec, adversary_out), grads);
        adam_step(learner_adam, model.params, grads);
        if (observer.on_step) observer.on_step(step_index, model.params);
        ++step_index;
      },
      [&](std::size_t epoch) {
        const auto predictions = FrozenNet(model.params, cfg).predict(xs);
        const auto adv = FrozenNet(adversary, cfg).predict(xs);
        model.loss_trace.push_back(minmax_reg_terms(spec, ds, all, predictions, adv).pair_loss);
        if (track_mae) model.mae_trace.push_back(detail::mae_against_truth(predictions, ds));
        if (observer.on_epoch) observer.on_epoch(epoch, model.params);
      });
  if (cfg.lipschitz) power_iterate(model.params, kExportPowerIterations);
  return model;
}

/// Trains the student of a PL variant against already-trained teachers.
[[nodiscard]] inline TrainedModel train_student(const ObjectiveSpec& spec, const TrainConfig& tc,
                                                const IntervalDataset& ds, std::span<const TrainedModel> teachers,
                                                const TrainObserver& observer = {}) {
  spec.validate();
  if (!spec.uses_teachers()) throw ConfigError(to_string(spec.kind) + " does not use teachers");
  const PseudoLabels labels = make_pseudo_labels(teachers, FeatureMatrix::from_dataset(ds));
  return train_with_loss(spec, tc, ds, make_batch_loss(spec, ds, &labels), observer);
}

/// Teachers for the PL variants: projection-trained models with seeds
/// seed + 1, ..., seed + k, trained concurrently.
[[nodiscard]] inline std::vector<TrainedModel> train_teachers(const ObjectiveSpec& spec, const TrainConfig& tc,
                                                              const IntervalDataset& ds) {
  ObjectiveSpec teacher_spec;
  teacher_spec.kind = ObjectiveKind::kProjection;
  teacher_spec.loss_exponent = spec.loss_exponent;
  std::vector<std::future<TrainedModel>> pending;
  pending.reserve(spec.k);
  for (std::size_t j = 0; j < spec.k; ++j) {
    TrainConfig teacher_tc = tc;
    teacher_tc.seed = tc.seed + j + 1;
    pending.push_back(std::async(std::launch::async, [teacher_spec, teacher_tc, &ds] {
      return train_with_loss(teacher_spec, teacher_tc, ds, make_batch_loss(teacher_spec, ds));
    }));
  }
  std::vector<TrainedModel> teachers;
  teachers.reserve(spec.k);
  for (auto& f : pending) teachers.push_back(f.get());
  return teachers;
}

/// Trains a model with the given objective. Deterministic in (spec, tc, ds).
[[nodiscard]] inline TrainedModel train(const ObjectiveSpec& spec, const TrainConfig& tc, const IntervalDataset& ds,
                                        const TrainObserver& observer = {}) {
  spec.validate();
  tc.validate();
  if (spec.kind == ObjectiveKind::kMinmaxReg) return train_minmax_reg(spec, tc, ds, observer);
  if (spec.uses_teachers()) {
    const auto teachers = train_teachers(spec, tc, ds);
    return train_student(spec, tc, ds, teachers, observer);
  }
  return train_with_loss(spec, tc, ds, make_batch_loss(spec, ds), observer);
}

// ---------------------------------------------------------------------------
// Two-point constant-hypothesis construction
// ---------------------------------------------------------------------------

/// X = {0, 1}, f* = 0, constant hypotheses, intervals [-a, eps] at x = 0 and
/// [-eps, 2 eps] at x = 1. Constants consistent with both intervals form
/// [-eps, eps]; minimising the worst case over those constants picks 0, while
/// minimising the label-level worst-case loss is indifferent over a whole
/// interval of constants whose far end has error (a - eps) / 2.
struct ConstantClassFixture {
  double f1_value = 0.0;            ///< minimiser of the hypothesis-constrained minmax
  double f1_error = 0.0;
  Interval label_minmax_minimizers;  ///< flat bottom of the label-level minmax objective
  double worst_tie_error = 0.0;
};

[[nodiscard]] inline ConstantClassFixture constant_class_minmax_fixture(double a, double epsilon) {
  if (!(epsilon > 0.0) || !(a > epsilon)) throw ConfigError("fixture needs a > epsilon > 0");
  const Interval at_zero(-a, epsilon);
  const Interval at_one(-epsilon, 2.0 * epsilon);
  const auto consistent = intersect_groups({IntervalGroup{{}, {at_zero, at_one}}}).front().intersection;

  ConstantClassFixture out;
  // max over c in [-eps, eps] of |d - c| is the worst-case L1 loss on that
  // interval, |d - mid| + halfwidth, minimised at its midpoint.
  out.f1_value = consistent->midpoint();
  out.f1_error = std::fabs(out.f1_value);
  // mean_x (|d - mid_x| + halfwidth_x) is flat between the two midpoints.
  const double m0 = at_zero.midpoint();
  const double m1 = at_one.midpoint();
  out.label_minmax_minimizers = Interval(std::min(m0, m1), std::max(m0, m1));
  out.worst_tie_error =
      std::max(std::fabs(out.label_minmax_minimizers.lower()), std::fabs(out.label_minmax_minimizers.upper()));
  return out;
}

}  // namespace intervalreg
