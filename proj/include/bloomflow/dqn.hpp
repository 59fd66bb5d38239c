#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bloomflow/rng.hpp"

namespace bloomflow {

/// Perturbation action space: 0..30 percent in 1% steps.
inline constexpr int kActionCount = 31;

struct Transition {
    std::vector<double> state;
    int action = 0;
    int reward = 0;  // in {-1, 0, +1}
    std::vector<double> next_state;
    bool terminal = false;
};

/// Plain multilayer perceptron: ReLU on hidden layers, identity output.
/// Weight layout is row-major [out][in]; parameters are addressable
/// through a flat index (weights then biases, layer by layer) so gradient
/// checks can walk them.
class QNetwork {
public:
    /// sizes = {input, hidden..., output}; output must be kActionCount.
    QNetwork(std::vector<int> sizes, std::uint64_t seed);

    int input_dim() const { return sizes_.front(); }
    int output_dim() const { return sizes_.back(); }
    const std::vector<int>& sizes() const { return sizes_; }

    std::vector<double> forward(std::span<const double> input) const;

    /// Forward pass keeping post-activation values per layer (index 0 is
    /// the input itself); used by backprop.
    std::vector<std::vector<double>> forward_cached(std::span<const double> input) const;

    std::size_t parameter_count() const;
    double get_parameter(std::size_t index) const;
    void set_parameter(std::size_t index, double value);

    std::size_t layer_count() const { return weights_.size(); }
    std::vector<double>& weights(std::size_t layer) { return weights_[layer]; }
    std::vector<double>& biases(std::size_t layer) { return biases_[layer]; }
    const std::vector<double>& weights(std::size_t layer) const { return weights_[layer]; }
    const std::vector<double>& biases(std::size_t layer) const { return biases_[layer]; }

private:
    std::vector<int> sizes_;
    std::vector<std::vector<double>> weights_;  // [layer][out * in_dim + in]
    std::vector<std::vector<double>> biases_;   // [layer][out]
};

struct Gradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
};

/// Mean squared TD error of the taken actions against precomputed targets.
double batch_loss(const QNetwork& net, std::span<const Transition> batch,
                  std::span<const double> targets);

/// Analytic gradients of batch_loss with respect to every parameter.
Gradients batch_gradients(const QNetwork& net, std::span<const Transition> batch,
                          std::span<const double> targets, double* loss_out = nullptr);

/// Adaptive-moment gradient descent over a QNetwork's parameters.
class Adam {
public:
    Adam(double learning_rate, std::size_t parameter_count, double beta1 = 0.9,
         double beta2 = 0.999, double epsilon = 1e-8);
    void step(QNetwork& net, const Gradients& grads);

private:
    double lr_, beta1_, beta2_, eps_;
    std::uint64_t t_ = 0;
    std::vector<double> m_, v_;
};

/// Fixed-capacity ring buffer with uniform sampling.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);
    void add(Transition t);
    std::size_t size() const { return store_.size(); }
    std::size_t capacity() const { return capacity_; }
    /// Throws std::logic_error when size() < batch.
    std::vector<Transition> sample(std::size_t batch, RandomStream& rng) const;

private:
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::vector<Transition> store_;
};

struct AgentConfig {
    int input_dim = 0;
    std::vector<int> hidden_layers = {128, 128, 128};
    double learning_rate = 0.001;
    double gamma = 0.99;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    std::uint64_t epsilon_decay_steps = 1000;
    std::size_t buffer_capacity = 10000;
    std::size_t batch_size = 64;
    std::uint64_t target_sync_period = 500;  // train steps between target copies
    std::size_t warmup = 256;                // buffer size before training starts
    std::uint64_t seed = 101;

    void validate() const;  // throws std::invalid_argument
};

/// Deep Q-learning agent: online + target network, replay, epsilon-greedy
/// selection over the 31 perturbation actions. Single-owner; mutated only
/// by the simulation loop.
class DqnAgent {
public:
    explicit DqnAgent(const AgentConfig& config);

    /// Epsilon-greedy when explore is set (advances the schedule),
    /// pure argmax otherwise. Argmax ties go to the lowest action index.
    int select_action(std::span<const double> state, bool explore);

    void observe(Transition t);

    /// One gradient step when the buffer has warmed up; returns the loss.
    /// Throws std::runtime_error if the loss turns non-finite.
    std::optional<double> maybe_train();

    double epsilon() const;
    std::uint64_t decisions() const { return decisions_; }
    std::uint64_t train_steps() const { return train_steps_; }
    const QNetwork& network() const { return online_; }
    QNetwork& network() { return online_; }
    const AgentConfig& config() const { return config_; }

    /// Versioned binary checkpoint: layer-size header then row-major
    /// weights and biases as little-endian 64-bit floats.
    void save_checkpoint(const std::filesystem::path& path) const;
    void load_checkpoint(const std::filesystem::path& path);

private:
    AgentConfig config_;
    QNetwork online_;
    QNetwork target_;
    ReplayBuffer buffer_;
    Adam adam_;
    RandomStream rng_;
    std::uint64_t decisions_ = 0;
    std::uint64_t train_steps_ = 0;
};

}  // namespace bloomflow
