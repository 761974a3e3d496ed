#pragma once

/// \file
/// A small dense ReLU network with hand-written reverse-mode gradients, Adam,
/// and optional spectral normalization.
///
/// With a Lipschitz scale m, every weight matrix W is used as W / sigma where
/// sigma = u^T W v comes from persistent power-iteration vectors (u, v), and
/// the network output is multiplied by m. ReLU is 1-Lipschitz, so the network
/// is m-Lipschitz up to the accuracy of the sigma estimates. Gradients flow
/// through sigma with (u, v) held fixed; the vectors themselves are only
/// updated by power_iterate().

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "intervalreg/core.hpp"
#include "intervalreg/denoise.hpp"
#include "intervalreg/rng.hpp"

namespace intervalreg {

struct MlpConfig {
  /// Input width first, output width (always 1) last.
  std::vector<std::size_t> layer_sizes;
  /// When set, enables spectral normalization and scales the output by m.
  std::optional<double> lipschitz;
  std::size_t power_iterations = 5;
  std::uint64_t init_seed = 0;

  static MlpConfig with_hidden(std::size_t input_dim, std::vector<std::size_t> hidden = {10, 20, 30}) {
    MlpConfig cfg;
    cfg.layer_sizes.push_back(input_dim);
    cfg.layer_sizes.insert(cfg.layer_sizes.end(), hidden.begin(), hidden.end());
    cfg.layer_sizes.push_back(1);
    return cfg;
  }

  [[nodiscard]] std::size_t input_dim() const { return layer_sizes.front(); }
  [[nodiscard]] double output_scale() const { return lipschitz.value_or(1.0); }

  void validate() const {
    if (layer_sizes.size() < 2) throw ConfigError("network needs at least an input and an output layer");
    if (layer_sizes.back() != 1) throw ConfigError("network output width must be 1");
    for (auto w : layer_sizes) {
      if (w == 0) throw ConfigError("layer widths must be positive");
    }
    if (lipschitz && !(*lipschitz > 0.0 && std::isfinite(*lipschitz))) {
      throw ConfigError("Lipschitz constant must be positive");
    }
    if (power_iterations == 0) throw ConfigError("power_iterations must be positive");
  }
};

struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weight;  ///< outputs x inputs, row-major
  std::vector<double> bias;
  std::vector<double> left;    ///< power-iteration estimate of the top left singular vector
  std::vector<double> right;   ///< ... and of the top right singular vector

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct MlpParams {
  std::vector<DenseLayer> layers;
  friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

/// Gradient (or optimizer moment) with the shapes of the trainable tensors.
struct LayerTensors {
  std::vector<double> weight;
  std::vector<double> bias;
};

struct MlpGrads {
  std::vector<LayerTensors> layers;

  static MlpGrads zeros_like(const MlpParams& params) {
    MlpGrads g;
    g.layers.reserve(params.layers.size());
    for (const auto& l : params.layers) {
      g.layers.push_back({std::vector<double>(l.weight.size(), 0.0), std::vector<double>(l.bias.size(), 0.0)});
    }
    return g;
  }

  void fill(double value) {
    for (auto& l : layers) {
      std::fill(l.weight.begin(), l.weight.end(), value);
      std::fill(l.bias.begin(), l.bias.end(), value);
    }
  }

  void scale(double factor) {
    for (auto& l : layers) {
      for (double& w : l.weight) w *= factor;
      for (double& b : l.bias) b *= factor;
    }
  }
};

// ---------------------------------------------------------------------------
// Spectral normalization
// ---------------------------------------------------------------------------

inline constexpr double kSigmaFloor = 1e-12;

namespace detail {

inline bool normalize_in_place(std::vector<double>& v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (!(norm > 0.0) || !std::isfinite(norm)) return false;
  for (double& x : v) x /= norm;
  return true;
}

/// u^T W v without flooring.
inline double raw_sigma(const DenseLayer& layer) {
  double acc = 0.0;
  for (std::size_t r = 0; r < layer.outputs; ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < layer.inputs; ++c) row += layer.weight[r * layer.inputs + c] * layer.right[c];
    acc += layer.left[r] * row;
  }
  return acc;
}

}  // namespace detail

/// Current estimate of the largest singular value, floored at kSigmaFloor.
[[nodiscard]] inline double spectral_scale(const DenseLayer& layer) {
  return std::max(detail::raw_sigma(layer), kSigmaFloor);
}

/// v <- W^T u / |W^T u|, u <- W v / |W v|, repeated. A zero matrix leaves
/// the vectors untouched.
inline void power_iterate(DenseLayer& layer, std::size_t iterations) {
  std::vector<double> v(layer.inputs);
  std::vector<double> u(layer.outputs);
  for (std::size_t it = 0; it < iterations; ++it) {
    std::fill(v.begin(), v.end(), 0.0);
    for (std::size_t r = 0; r < layer.outputs; ++r) {
      for (std::size_t c = 0; c < layer.inputs; ++c) v[c] += layer.weight[r * layer.inputs + c] * layer.left[r];
    }
    if (!detail::normalize_in_place(v)) return;
    for (std::size_t r = 0; r < layer.outputs; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < layer.inputs; ++c) acc += layer.weight[r * layer.inputs + c] * v[c];
      u[r] = acc;
    }
    if (!detail::normalize_in_place(u)) return;
    layer.right = v;
    layer.left = u;
  }
}

inline void power_iterate(MlpParams& params, std::size_t iterations) {
  for (auto& layer : params.layers) power_iterate(layer, iterations);
}

/// Runs the configured number of power iterations on every layer. The
/// effective weights W / sigma are what forward() uses afterwards.
[[nodiscard]] inline MlpParams spectral_normalize(MlpParams params, const MlpConfig& cfg) {
  power_iterate(params, cfg.power_iterations);
  return params;
}

/// Iteration count of the high-precision pass applied once training ends.
inline constexpr std::size_t kExportPowerIterations = 50;

/// The matrix the network actually applies: W, or W / sigma when normalized.
[[nodiscard]] inline std::vector<double> effective_weight(const DenseLayer& layer, const MlpConfig& cfg) {
  if (!cfg.lipschitz) return layer.weight;
  const double sigma = spectral_scale(layer);
  std::vector<double> out(layer.weight.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = layer.weight[i] / sigma;
  return out;
}

// ---------------------------------------------------------------------------
// Initialization
// ---------------------------------------------------------------------------

/// He-style uniform initialization: weights ~ U[-sqrt(6 / fan_in), +...],
/// biases ~ U[-1/sqrt(fan_in), +...]. Power-iteration vectors start random and
/// receive `cfg.power_iterations` iterations so sigma is usable immediately.
[[nodiscard]] inline MlpParams init_params(const MlpConfig& cfg, std::uint64_t stream = streams::kInit) {
  cfg.validate();
  CounterRng rng(cfg.init_seed, stream);
  CounterRng sv_rng(cfg.init_seed, streams::kPowerIteration ^ (stream << 8U));
  MlpParams params;
  for (std::size_t l = 0; l + 1 < cfg.layer_sizes.size(); ++l) {
    DenseLayer layer;
    layer.inputs = cfg.layer_sizes[l];
    layer.outputs = cfg.layer_sizes[l + 1];
    const double fan_in = static_cast<double>(layer.inputs);
    const double w_bound = std::sqrt(6.0 / fan_in);
    const double b_bound = 1.0 / std::sqrt(fan_in);
    layer.weight.resize(layer.inputs * layer.outputs);
    for (double& w : layer.weight) w = rng.uniform(-w_bound, w_bound);
    layer.bias.resize(layer.outputs);
    for (double& b : layer.bias) b = rng.uniform(-b_bound, b_bound);
    layer.left.resize(layer.outputs);
    layer.right.resize(layer.inputs);
    for (double& x : layer.left) x = sv_rng.uniform(-1.0, 1.0);
    for (double& x : layer.right) x = sv_rng.uniform(-1.0, 1.0);
    detail::normalize_in_place(layer.left);
    detail::normalize_in_place(layer.right);
    params.layers.push_back(std::move(layer));
  }
  if (cfg.lipschitz) power_iterate(params, cfg.power_iterations);
  return params;
}

inline void check_shapes(const MlpParams& params, const MlpConfig& cfg) {
  if (params.layers.size() + 1 != cfg.layer_sizes.size()) throw DataError("parameter/config layer count mismatch");
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& layer = params.layers[l];
    if (layer.inputs != cfg.layer_sizes[l] || layer.outputs != cfg.layer_sizes[l + 1] ||
        layer.weight.size() != layer.inputs * layer.outputs || layer.bias.size() != layer.outputs ||
        layer.left.size() != layer.outputs || layer.right.size() != layer.inputs) {
      throw DataError("layer " + std::to_string(l) + " has inconsistent shapes");
    }
  }
}

// ---------------------------------------------------------------------------
// Forward / backward
// ---------------------------------------------------------------------------

/// Precomputed effective weights for repeated evaluation of a fixed network.
class FrozenNet {
 public:
  FrozenNet(const MlpParams& params, const MlpConfig& cfg) : output_scale_(cfg.output_scale()) {
    check_shapes(params, cfg);
    layers_.reserve(params.layers.size());
    for (const auto& layer : params.layers) {
      const double sigma = cfg.lipschitz ? spectral_scale(layer) : 1.0;
      layers_.push_back({layer.inputs, layer.outputs, effective_weight(layer, cfg), layer.bias, sigma});
    }
  }

  [[nodiscard]] std::size_t input_dim() const { return layers_.front().inputs; }

  /// Forward pass; `activations[l]` receives the input of layer l and the
  /// last entry the unscaled linear output.
  double forward(std::span<const double> x, std::vector<std::vector<double>>& activations) const {
    if (x.size() != input_dim()) {
      throw DataError("input has " + std::to_string(x.size()) + " features, network expects " +
                      std::to_string(input_dim()));
    }
    activations.resize(layers_.size() + 1);
    activations[0].assign(x.begin(), x.end());
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const auto& layer = layers_[l];
      const auto& in = activations[l];
      auto& out = activations[l + 1];
      out.resize(layer.outputs);
      const bool hidden = l + 1 < layers_.size();
      for (std::size_t r = 0; r < layer.outputs; ++r) {
        double acc = layer.bias[r];
        const double* w = layer.weight.data() + r * layer.inputs;
        for (std::size_t c = 0; c < layer.inputs; ++c) acc += w[c] * in[c];
        out[r] = hidden ? std::max(acc, 0.0) : acc;
      }
    }
    return output_scale_ * activations.back()[0];
  }

  [[nodiscard]] double operator()(std::span<const double> x) const {
    std::vector<std::vector<double>> scratch;
    return forward(x, scratch);
  }

  [[nodiscard]] std::vector<double> predict(const FeatureMatrix& xs) const {
    std::vector<double> out(xs.rows());
    std::vector<std::vector<double>> scratch;
    for (std::size_t i = 0; i < xs.rows(); ++i) out[i] = forward(xs.row(i), scratch);
    return out;
  }

  struct Layer {
    std::size_t inputs;
    std::size_t outputs;
    std::vector<double> weight;
    std::vector<double> bias;
    double sigma;
  };
  [[nodiscard]] const std::vector<Layer>& layers() const { return layers_; }
  [[nodiscard]] double output_scale() const { return output_scale_; }

 private:
  std::vector<Layer> layers_;
  double output_scale_ = 1.0;
};

[[nodiscard]] inline double forward(const MlpParams& params, const MlpConfig& cfg, std::span<const double> x) {
  return FrozenNet(params, cfg)(x);
}

/// Computes a batch loss and its gradient for an arbitrary loss on the batch
/// outputs.
///
/// `loss_fn(outputs, dloss)` receives the network outputs for `rows` (in
/// order), must write d(loss)/d(output_i) into `dloss`, and returns the loss.
/// `grads` is overwritten with the gradient of that loss w.r.t. every weight
/// and bias.
template <typename LossFn>
double batch_loss_and_grad(const MlpParams& params, const MlpConfig& cfg, const FeatureMatrix& xs,
                           std::span<const std::size_t> rows, LossFn&& loss_fn, MlpGrads& grads) {
  if (rows.empty()) throw DataError("empty batch");
  const FrozenNet net(params, cfg);
  const std::size_t depth = params.layers.size();

  std::vector<std::vector<std::vector<double>>> acts(rows.size());
  std::vector<double> outputs(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) outputs[i] = net.forward(xs.row(rows[i]), acts[i]);

  std::vector<double> dloss(rows.size(), 0.0);
  const double loss = loss_fn(std::span<const double>(outputs), std::span<double>(dloss));

  // Gradients w.r.t. the effective weights first; the chain rule through
  // sigma is applied once at the end.
  grads = MlpGrads::zeros_like(params);
  std::vector<double> delta;
  std::vector<double> next_delta;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (dloss[i] == 0.0) continue;
    delta.assign(1, net.output_scale() * dloss[i]);
    for (std::size_t l = depth; l-- > 0;) {
      const auto& layer = net.layers()[l];
      const auto& in = acts[i][l];
      auto& g = grads.layers[l];
      for (std::size_t r = 0; r < layer.outputs; ++r) {
        const double d = delta[r];
        if (d == 0.0) continue;
        g.bias[r] += d;
        double* gw = g.weight.data() + r * layer.inputs;
        for (std::size_t c = 0; c < layer.inputs; ++c) gw[c] += d * in[c];
      }
      if (l == 0) break;
      next_delta.assign(layer.inputs, 0.0);
      for (std::size_t r = 0; r < layer.outputs; ++r) {
        const double d = delta[r];
        if (d == 0.0) continue;
        const double* w = layer.weight.data() + r * layer.inputs;
        for (std::size_t c = 0; c < layer.inputs; ++c) next_delta[c] += w[c] * d;
      }
      // ReLU: the stored activation is post-ReLU, positive exactly where the
      // pre-activation was; the subgradient at 0 is 0.
      for (std::size_t c = 0; c < layer.inputs; ++c) {
        if (!(in[c] > 0.0)) next_delta[c] = 0.0;
      }
      delta.swap(next_delta);
    }
  }

  if (cfg.lipschitz) {
    // W_eff = W / sigma, sigma = u^T W v:
    // dL/dW = G / sigma - <G, W> / sigma^2 * u v^T.
    for (std::size_t l = 0; l < depth; ++l) {
      const auto& layer = params.layers[l];
      auto& g = grads.layers[l].weight;
      const double raw = detail::raw_sigma(layer);
      const double sigma = std::max(raw, kSigmaFloor);
      double inner = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) inner += g[k] * layer.weight[k];
      for (double& gk : g) gk /= sigma;
      if (raw > kSigmaFloor) {
        const double coeff = inner / (sigma * sigma);
        for (std::size_t r = 0; r < layer.outputs; ++r) {
          for (std::size_t c = 0; c < layer.inputs; ++c) {
            g[r * layer.inputs + c] -= coeff * layer.left[r] * layer.right[c];
          }
        }
      }
    }
  }
  return loss;
}

// Per-sample loss specifications ------------------------------------------

struct ProjectionTarget {
  Interval interval;
};
struct WorstCaseTarget {
  Interval interval;
};
struct PointTarget {
  double y = 0.0;
};
using LossSpec = std::variant<ProjectionTarget, WorstCaseTarget, PointTarget>;

[[nodiscard]] inline double sample_loss(const LossFamily& family, double yhat, const LossSpec& spec) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ProjectionTarget>) return projection_loss(family, yhat, s.interval);
        else if constexpr (std::is_same_v<T, WorstCaseTarget>) return worstcase_loss(family, yhat, s.interval);
        else return psi_loss(family, yhat, s.y);
      },
      spec);
}

[[nodiscard]] inline double sample_loss_grad(const LossFamily& family, double yhat, const LossSpec& spec) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ProjectionTarget>) return projection_loss_grad(family, yhat, s.interval);
        else if constexpr (std::is_same_v<T, WorstCaseTarget>) return worstcase_loss_grad(family, yhat, s.interval);
        else return psi_loss_grad(family, yhat, s.y);
      },
      spec);
}

struct LabeledInput {
  std::vector<double> x;
  LossSpec spec;
};

struct LossAndGrad {
  double loss = 0.0;
  MlpGrads grads;
};

/// Mean per-sample loss over the batch and its exact gradient. Piecewise
/// losses use subgradient 0 at their kinks.
[[nodiscard]] inline LossAndGrad loss_and_grad(const MlpParams& params, const MlpConfig& cfg,
                                               const LossFamily& family, std::span<const LabeledInput> batch) {
  if (batch.empty()) throw DataError("empty batch");
  std::vector<std::vector<double>> rows;
  rows.reserve(batch.size());
  for (const auto& item : batch) rows.push_back(item.x);
  const FeatureMatrix xs = FeatureMatrix::from_rows(rows);
  std::vector<std::size_t> idx(batch.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  LossAndGrad out;
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  out.loss = batch_loss_and_grad(
      params, cfg, xs, idx,
      [&](std::span<const double> yhat, std::span<double> dloss) {
        double total = 0.0;
        for (std::size_t i = 0; i < yhat.size(); ++i) {
          total += sample_loss(family, yhat[i], batch[i].spec);
          dloss[i] = sample_loss_grad(family, yhat[i], batch[i].spec) * inv_n;
        }
        return total * inv_n;
      },
      out.grads);
  return out;
}

// ---------------------------------------------------------------------------
// Adam
// ---------------------------------------------------------------------------

struct AdamState {
  MlpGrads first_moment;
  MlpGrads second_moment;
  std::uint64_t step = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState for_params(const MlpParams& params, double lr = 1e-3) {
    AdamState s;
    s.first_moment = MlpGrads::zeros_like(params);
    s.second_moment = MlpGrads::zeros_like(params);
    s.lr = lr;
    return s;
  }
};

/// One bias-corrected Adam update, in place. Pass negated gradients to ascend.
inline void adam_step(AdamState& state, MlpParams& params, const MlpGrads& grads) {
  if (grads.layers.size() != params.layers.size() || state.first_moment.layers.size() != params.layers.size()) {
    throw DataError("optimizer state does not match parameters");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  auto update = [&](std::vector<double>& theta, const std::vector<double>& g, std::vector<double>& m,
                    std::vector<double>& v) {
    if (theta.size() != g.size() || m.size() != g.size()) throw DataError("gradient shape mismatch");
    for (std::size_t k = 0; k < theta.size(); ++k) {
      m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * g[k];
      v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * g[k] * g[k];
      const double m_hat = m[k] / correction1;
      const double v_hat = v[k] / correction2;
      theta[k] -= state.lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  };
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    update(params.layers[l].weight, grads.layers[l].weight, state.first_moment.layers[l].weight,
           state.second_moment.layers[l].weight);
    update(params.layers[l].bias, grads.layers[l].bias, state.first_moment.layers[l].bias,
           state.second_moment.layers[l].bias);
  }
}

// ---------------------------------------------------------------------------
// Data-driven Lipschitz estimate
// ---------------------------------------------------------------------------

/// Percentile (linear interpolation between order statistics) of
/// |y_i - y_j| / |x_i - x_j| over distinct pairs. Uses every pair when there
/// are at most `max_pairs`, otherwise `max_pairs` pairs drawn uniformly with
/// replacement. Zero-distance pairs are skipped.
[[nodiscard]] inline double estimate_lipschitz_constant(const FeatureMatrix& xs, std::span<const double> ys,
                                                        double percentile = 95.0,
                                                        std::size_t max_pairs = 1'000'000,
                                                        std::uint64_t seed = 0, Norm norm = Norm::kEuclidean) {
  if (xs.rows() != ys.size()) throw DataError("feature rows and targets differ in length");
  if (xs.rows() < 2) throw DataError("need at least two rows to estimate a Lipschitz constant");
  if (!(percentile > 0.0 && percentile <= 100.0)) throw ConfigError("percentile must lie in (0, 100]");
  if (max_pairs == 0) throw ConfigError("max_pairs must be positive");

  const std::size_t n = xs.rows();
  std::vector<double> ratios;
  auto consider = [&](std::size_t i, std::size_t j) {
    const double d = distance(xs.row(i), xs.row(j), norm);
    if (d > 0.0) ratios.push_back(std::fabs(ys[i] - ys[j]) / d);
  };
  const double total_pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  if (total_pairs <= static_cast<double>(max_pairs)) {
    ratios.reserve(static_cast<std::size_t>(total_pairs));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) consider(i, j);
    }
  } else {
    ratios.reserve(max_pairs);
    CounterRng rng(seed, streams::kPairs);
    for (std::size_t k = 0; k < max_pairs; ++k) {
      const auto i = static_cast<std::size_t>(rng.below(n));
      auto j = static_cast<std::size_t>(rng.below(n - 1));
      if (j >= i) ++j;
      consider(i, j);
    }
  }
  if (ratios.empty()) throw DataError("every sampled pair has zero feature distance");

  const double rank = percentile / 100.0 * static_cast<double>(ratios.size() - 1);
  const auto lo_idx = static_cast<std::size_t>(std::floor(rank));
  const double frac = rank - static_cast<double>(lo_idx);
  std::nth_element(ratios.begin(), ratios.begin() + static_cast<std::ptrdiff_t>(lo_idx), ratios.end());
  const double lo = ratios[lo_idx];
  if (frac == 0.0 || lo_idx + 1 >= ratios.size()) return lo;
  const double hi = *std::min_element(ratios.begin() + static_cast<std::ptrdiff_t>(lo_idx) + 1, ratios.end());
  return lo + frac * (hi - lo);
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

inline constexpr int kCheckpointVersion = 1;

namespace detail {

inline void write_values(std::ostream& os, const char* tag, const std::vector<double>& values) {
  os << tag;
  for (double v : values) os << ' ' << std::hexfloat << v;
  os << std::defaultfloat << '\n';
}

inline std::vector<double> read_values(std::istream& is, const char* tag, std::size_t count) {
  std::string word;
  if (!(is >> word) || word != tag) throw DataError(std::string("checkpoint: expected '") + tag + "'");
  std::vector<double> out(count);
  for (auto& v : out) {
    if (!(is >> word)) throw DataError(std::string("checkpoint: truncated '") + tag + "' block");
    char* end = nullptr;
    v = std::strtod(word.c_str(), &end);
    if (end == word.c_str() || *end != '\0') throw DataError("checkpoint: bad number '" + word + "'");
  }
  return out;
}

}  // namespace detail

/// Text checkpoint; numbers are written as hexadecimal floats, so a reload
/// reproduces every bit.
inline void write_checkpoint(std::ostream& os, const MlpConfig& cfg, const MlpParams& params) {
  check_shapes(params, cfg);
  os << "intervalreg-mlp " << kCheckpointVersion << '\n';
  os << "layers " << cfg.layer_sizes.size();
  for (auto w : cfg.layer_sizes) os << ' ' << w;
  os << '\n';
  os << "lipschitz ";
  if (cfg.lipschitz) {
    os << std::hexfloat << *cfg.lipschitz << std::defaultfloat;
  } else {
    os << "none";
  }
  os << '\n';
  os << "power_iterations " << cfg.power_iterations << '\n';
  os << "init_seed " << cfg.init_seed << '\n';
  for (const auto& layer : params.layers) {
    detail::write_values(os, "weight", layer.weight);
    detail::write_values(os, "bias", layer.bias);
    detail::write_values(os, "left", layer.left);
    detail::write_values(os, "right", layer.right);
  }
}

struct Checkpoint {
  MlpConfig config;
  MlpParams params;
};

[[nodiscard]] inline Checkpoint read_checkpoint(std::istream& is) {
  std::string word;
  int version = 0;
  if (!(is >> word >> version) || word != "intervalreg-mlp") throw DataError("not an intervalreg checkpoint");
  if (version != kCheckpointVersion) throw DataError("unsupported checkpoint version " + std::to_string(version));
  Checkpoint ck;
  std::size_t count = 0;
  if (!(is >> word >> count) || word != "layers" || count < 2) throw DataError("checkpoint: bad layer header");
  ck.config.layer_sizes.resize(count);
  for (auto& w : ck.config.layer_sizes) {
    if (!(is >> w)) throw DataError("checkpoint: bad layer sizes");
  }
  if (!(is >> word) || word != "lipschitz" || !(is >> word)) throw DataError("checkpoint: missing lipschitz");
  if (word != "none") ck.config.lipschitz = std::strtod(word.c_str(), nullptr);
  if (!(is >> word >> ck.config.power_iterations) || word != "power_iterations") {
    throw DataError("checkpoint: missing power_iterations");
  }
  if (!(is >> word >> ck.config.init_seed) || word != "init_seed") throw DataError("checkpoint: missing init_seed");
  ck.config.validate();
  for (std::size_t l = 0; l + 1 < count; ++l) {
    DenseLayer layer;
    layer.inputs = ck.config.layer_sizes[l];
    layer.outputs = ck.config.layer_sizes[l + 1];
    layer.weight = detail::read_values(is, "weight", layer.inputs * layer.outputs);
    layer.bias = detail::read_values(is, "bias", layer.outputs);
    layer.left = detail::read_values(is, "left", layer.outputs);
    layer.right = detail::read_values(is, "right", layer.inputs);
    ck.params.layers.push_back(std::move(layer));
  }
  return ck;
}

}  // namespace intervalreg
