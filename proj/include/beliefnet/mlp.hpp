#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "beliefnet/mass_function.hpp"

namespace beliefnet {

/// Raised when training produces a NaN or infinity.
struct NonFiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised for a target bba with no mass on any singleton.
struct UnusableSampleError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Fully connected feedforward network of sigmoid units f(x) = 1/(1+exp(-c x)).
///
/// Layer l holds an (in x out) weight matrix and an out-vector of biases, so
/// the pre-activation of layer l is W_l^T s + b_l.
template <typename Scalar = double>
class Network {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Network() = default;
  explicit Network(std::vector<int> sizes, Scalar slope = Scalar(1), bool use_bias = true)
      : sizes_(std::move(sizes)), slope_(slope), use_bias_(use_bias) {
    if (sizes_.size() < 2) throw std::invalid_argument("a network needs an input and an output layer");
    for (int s : sizes_)
      if (s < 1) throw std::invalid_argument("layer sizes must be positive");
    if (!(slope_ > Scalar(0))) throw std::invalid_argument("sigmoid slope must be positive");
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
      weights_.push_back(Matrix::Zero(sizes_[l], sizes_[l + 1]));
      biases_.push_back(Vector::Zero(sizes_[l + 1]));
    }
  }

  const std::vector<int>& sizes() const { return sizes_; }
  std::size_t layer_count() const { return weights_.size(); }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  Scalar slope() const { return slope_; }
  bool use_bias() const { return use_bias_; }

  Matrix& weights(std::size_t l) { return weights_.at(l); }
  const Matrix& weights(std::size_t l) const { return weights_.at(l); }
  Vector& biases(std::size_t l) { return biases_.at(l); }
  const Vector& biases(std::size_t l) const { return biases_.at(l); }

  bool all_finite() const {
    for (std::size_t l = 0; l < weights_.size(); ++l)
      if (!weights_[l].allFinite() || !biases_[l].allFinite()) return false;
    return true;
  }

  friend bool operator==(const Network& a, const Network& b) {
    if (a.sizes_ != b.sizes_ || a.slope_ != b.slope_ || a.use_bias_ != b.use_bias_) return false;
    for (std::size_t l = 0; l < a.weights_.size(); ++l)
      if (a.weights_[l] != b.weights_[l] || a.biases_[l] != b.biases_[l]) return false;
    return true;
  }

 private:
  std::vector<int> sizes_;
  Scalar slope_ = Scalar(1);
  bool use_bias_ = true;
  std::vector<Matrix> weights_;
  std::vector<Vector> biases_;
};

/// Weights and biases drawn i.i.d. from U[-r, r]; deterministic per seed.
template <typename Scalar = double>
Network<Scalar> init_network(std::vector<int> sizes, std::uint64_t seed, Scalar r, Scalar slope = Scalar(1),
                             bool use_bias = true) {
  if (!(r >= Scalar(0))) throw std::invalid_argument("initialization half-range must be non-negative");
  Network<Scalar> net(std::move(sizes), slope, use_bias);
  if (r == Scalar(0)) return net;
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-static_cast<double>(r), static_cast<double>(r));
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    auto& w = net.weights(l);
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = Scalar(dist(gen));
    if (use_bias)
      for (Eigen::Index j = 0; j < net.biases(l).size(); ++j) net.biases(l)(j) = Scalar(dist(gen));
  }
  return net;
}

template <typename Scalar>
struct ForwardPass {
  /// activations[0] is the input, activations.back() the output layer.
  std::vector<typename Network<Scalar>::Vector> activations;
  const typename Network<Scalar>::Vector& output() const { return activations.back(); }
};

template <typename Scalar, typename Derived>
ForwardPass<Scalar> forward(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& x) {
  using Vector = typename Network<Scalar>::Vector;
  if (x.size() != net.input_size())
    throw std::invalid_argument("input has " + std::to_string(x.size()) + " features, network expects " +
                                std::to_string(net.input_size()));
  ForwardPass<Scalar> pass;
  pass.activations.reserve(net.layer_count() + 1);
  pass.activations.push_back(x.template cast<Scalar>());
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    Vector z = net.weights(l).transpose() * pass.activations.back();
    if (net.use_bias()) z += net.biases(l);
    pass.activations.push_back((Scalar(1) / (Scalar(1) + (-net.slope() * z.array()).exp())).matrix());
  }
  return pass;
}

template <typename Scalar>
Scalar quadratic_error(const typename Network<Scalar>::Vector& output, const typename Network<Scalar>::Vector& target) {
  return Scalar(0.5) * (target - output).squaredNorm();
}

/// Gradient of the quadratic error with respect to every parameter.
template <typename Scalar>
struct Gradient {
  std::vector<typename Network<Scalar>::Matrix> weights;
  std::vector<typename Network<Scalar>::Vector> biases;
  Scalar error{};
};

namespace detail {

/// Back-propagated deltas, delta_l = c s (1 - s) (d - s) at the output and
/// c s (1 - s) W delta_{l+1} below it.
template <typename Scalar>
std::vector<typename Network<Scalar>::Vector> deltas(const Network<Scalar>& net, const ForwardPass<Scalar>& pass,
                                                     const typename Network<Scalar>::Vector& target) {
  using Vector = typename Network<Scalar>::Vector;
  const std::size_t layers = net.layer_count();
  std::vector<Vector> delta(layers);
  {
    const Vector& s = pass.activations[layers];
    delta[layers - 1] = (net.slope() * s.array() * (Scalar(1) - s.array()) * (target - s).array()).matrix();
  }
  for (std::size_t l = layers - 1; l-- > 0;) {
    const Vector& s = pass.activations[l + 1];
    const Vector back = net.weights(l + 1) * delta[l + 1];
    delta[l] = (net.slope() * s.array() * (Scalar(1) - s.array()) * back.array()).matrix();
  }
  return delta;
}

template <typename Scalar, typename Derived, typename TargetDerived>
void check_target(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>&,
                  const Eigen::MatrixBase<TargetDerived>& d) {
  if (d.size() != net.output_size())
    throw std::invalid_argument("target has " + std::to_string(d.size()) + " entries, network outputs " +
                                std::to_string(net.output_size()));
}

}  // namespace detail

template <typename Scalar, typename Derived, typename TargetDerived>
Gradient<Scalar> gradient(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& x,
                          const Eigen::MatrixBase<TargetDerived>& d) {
  using Vector = typename Network<Scalar>::Vector;
  detail::check_target(net, x, d);
  const auto pass = forward(net, x);
  const Vector target = d.template cast<Scalar>();
  const auto delta = detail::deltas(net, pass, target);
  Gradient<Scalar> g;
  g.error = quadratic_error<Scalar>(pass.output(), target);
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    g.weights.push_back(-pass.activations[l] * delta[l].transpose());
    g.biases.push_back(net.use_bias() ? Vector(-delta[l]) : Vector(Vector::Zero(delta[l].size())));
  }
  return g;
}

/// One online update w += eta * delta_out * s_in. Returns the error measured
/// before the update. Throws NonFiniteError and leaves the network untouched
/// if any intermediate is not finite.
template <typename Scalar, typename Derived, typename TargetDerived>
Scalar backprop_step(Network<Scalar>& net, const Eigen::MatrixBase<Derived>& x,
                     const Eigen::MatrixBase<TargetDerived>& d, Scalar eta) {
  using Vector = typename Network<Scalar>::Vector;
  detail::check_target(net, x, d);
  const auto pass = forward(net, x);
  const Vector target = d.template cast<Scalar>();
  const auto delta = detail::deltas(net, pass, target);
  const Scalar error = quadratic_error<Scalar>(pass.output(), target);
  using std::isfinite;
  if (!isfinite(error)) throw NonFiniteError("non-finite training error");
  for (const auto& v : delta)
    if (!v.allFinite()) throw NonFiniteError("non-finite back-propagated delta");
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    net.weights(l).noalias() += eta * pass.activations[l] * delta[l].transpose();
    if (net.use_bias()) net.biases(l) += eta * delta[l];
  }
  return error;
}

/// Singleton masses scaled so the largest is 1; compound masses are ignored.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> belief_targets(const MassFunction& m) {
  const Frame& frame = m.frame();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> d(static_cast<Eigen::Index>(frame.size()));
  for (std::size_t i = 0; i < frame.size(); ++i) d(static_cast<Eigen::Index>(i)) = Scalar(m.mass(FocalSet::singleton(i)));
  const Scalar peak = d.maxCoeff();
  if (!(peak > Scalar(0))) throw UnusableSampleError("target bba has no mass on any singleton");
  return d / peak;
}

struct OutputMass {
  MassFunction mass;
  /// All outputs were equal; mass is the uniform bba over singletons.
  bool degenerate = false;
};

/// Zeroes every occurrence of the minimum output and rescales to unit sum.
template <typename Derived>
OutputMass outputs_to_mass(const Eigen::MatrixBase<Derived>& s, const Frame& frame) {
  const auto k = static_cast<Eigen::Index>(frame.size());
  if (k < 2) throw std::invalid_argument("outputs_to_mass needs at least two classes");
  if (s.size() != k) throw std::invalid_argument("output vector length does not match the frame");
  std::vector<std::pair<FocalSet, double>> entries;
  const double lowest = static_cast<double>(s.minCoeff());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    const double v = static_cast<double>(s(i));
    if (v == lowest) continue;
    sum += v;
  }
  OutputMass out;
  if (!(sum > 0.0)) {
    for (Eigen::Index i = 0; i < k; ++i) entries.emplace_back(FocalSet::singleton(static_cast<std::size_t>(i)), 1.0 / static_cast<double>(k));
    out.degenerate = true;
  } else {
    for (Eigen::Index i = 0; i < k; ++i) {
      const double v = static_cast<double>(s(i));
      if (v != lowest) entries.emplace_back(FocalSet::singleton(static_cast<std::size_t>(i)), v / sum);
    }
  }
  out.mass = MassFunction(frame, entries);
  return out;
}

template <typename Scalar = double>
struct BeliefSample {
  typename Network<Scalar>::Vector features;
  MassFunction target_bba;
  typename Network<Scalar>::Vector target;
};

template <typename Scalar = double, typename Derived>
BeliefSample<Scalar> make_belief_sample(const Eigen::MatrixBase<Derived>& features, MassFunction target_bba) {
  BeliefSample<Scalar> sample;
  sample.features = features.template cast<Scalar>();
  sample.target = belief_targets<Scalar>(target_bba);
  sample.target_bba = std::move(target_bba);
  return sample;
}

struct TrainConfig {
  double eta = 0.1;
  int epochs = 100;
  std::uint64_t seed = 1;
  double init_range = 0.5;
  bool shuffle = true;

  void validate() const {
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw std::invalid_argument("learning rate must be non-negative");
    if (epochs < 1) throw std::invalid_argument("training needs at least one epoch");
    if (!(init_range >= 0.0)) throw std::invalid_argument("initialization half-range must be non-negative");
  }
};

template <typename Scalar>
struct TrainResult {
  /// Mean sample error per epoch.
  std::vector<Scalar> epoch_error;
};

/// Online backpropagation over `samples` for cfg.epochs epochs, visiting
/// samples in a seeded shuffled order when cfg.shuffle is set.
template <typename Scalar>
TrainResult<Scalar> train(Network<Scalar>& net, std::span<const BeliefSample<Scalar>> samples, const TrainConfig& cfg) {
  cfg.validate();
  if (samples.empty()) throw std::invalid_argument("training needs at least one sample");
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 gen(cfg.seed);
  TrainResult<Scalar> result;
  result.epoch_error.reserve(static_cast<std::size_t>(cfg.epochs));
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) std::shuffle(order.begin(), order.end(), gen);
    Scalar total(0);
    for (std::size_t i : order) total += backprop_step(net, samples[i].features, samples[i].target, Scalar(cfg.eta));
    result.epoch_error.push_back(total / Scalar(samples.size()));
  }
  return result;
}

/// Output index chosen by `criterion` after outputs_to_mass. Under max-betp
/// this is the raw argmax, lowest index on ties.
template <typename Scalar, typename Derived>
std::size_t classify(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& x, DecisionCriterion criterion,
                     const Frame& classes) {
  const auto pass = forward(net, x);
  const auto out = outputs_to_mass(pass.output(), classes);
  const FocalSet chosen = decide(out.mass, criterion);
  return static_cast<std::size_t>(std::countr_zero(chosen.bits));
}

/// Per-feature affine standardization fitted on a training set.
struct FeatureScaling {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static FeatureScaling identity(Eigen::Index n) {
    return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n)};
  }

  /// Zero mean, unit variance per column; constant columns keep scale 1.
  static FeatureScaling fit(std::span<const Eigen::VectorXd> rows) {
    if (rows.empty()) throw std::invalid_argument("cannot fit feature scaling on an empty set");
    const Eigen::Index n = rows.front().size();
    FeatureScaling s{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
    for (const auto& r : rows) s.mean += r;
    s.mean /= static_cast<double>(rows.size());
    for (const auto& r : rows) s.scale += (r - s.mean).cwiseAbs2();
    s.scale = (s.scale / static_cast<double>(rows.size())).cwiseSqrt();
    for (Eigen::Index i = 0; i < n; ++i)
      if (!(s.scale(i) > 1e-12)) s.scale(i) = 1.0;
    return s;
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    if (x.size() != mean.size()) throw std::invalid_argument("feature vector length does not match the scaling");
    return ((x - mean).array() / scale.array()).matrix();
  }
};

}  // namespace beliefnet
