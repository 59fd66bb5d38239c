#include "bloomflow/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace bloomflow {

QNetwork::QNetwork(std::vector<int> sizes, std::uint64_t seed) : sizes_(std::move(sizes)) {
    if (sizes_.size() < 2) throw std::invalid_argument("QNetwork: need input and output sizes");
    for (int s : sizes_) {
        if (s < 1) throw std::invalid_argument("QNetwork: layer sizes must be positive");
    }
    if (sizes_.back() != kActionCount)
        throw std::invalid_argument("QNetwork: output dimension must be 31");

    RandomStream rng(seed);
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        auto in = static_cast<std::size_t>(sizes_[l]);
        auto out = static_cast<std::size_t>(sizes_[l + 1]);
        double bound = 1.0 / std::sqrt(static_cast<double>(in));
        std::vector<double> w(out * in);
        for (double& x : w) x = (rng.next_unit() * 2.0 - 1.0) * bound;
        weights_.push_back(std::move(w));
        biases_.emplace_back(out, 0.0);
    }
}

std::vector<double> QNetwork::forward(std::span<const double> input) const {
    if (static_cast<int>(input.size()) != input_dim())
        throw std::invalid_argument("QNetwork::forward: input dimension mismatch");
    std::vector<double> cur(input.begin(), input.end());
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        auto in = static_cast<std::size_t>(sizes_[l]);
        auto out = static_cast<std::size_t>(sizes_[l + 1]);
        std::vector<double> next(out);
        const double* w = weights_[l].data();
        for (std::size_t j = 0; j < out; ++j) {
            double acc = biases_[l][j];
            const double* row = w + j * in;
            for (std::size_t i = 0; i < in; ++i) acc += row[i] * cur[i];
            next[j] = (l + 1 < weights_.size() && acc < 0.0) ? 0.0 : acc;  // ReLU hidden
        }
        cur = std::move(next);
    }
    return cur;
}

std::vector<std::vector<double>> QNetwork::forward_cached(
    std::span<const double> input) const {
    if (static_cast<int>(input.size()) != input_dim())
        throw std::invalid_argument("QNetwork::forward_cached: input dimension mismatch");
    std::vector<std::vector<double>> acts;
    acts.reserve(sizes_.size());
    acts.emplace_back(input.begin(), input.end());
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        auto in = static_cast<std::size_t>(sizes_[l]);
        auto out = static_cast<std::size_t>(sizes_[l + 1]);
        std::vector<double> next(out);
        const double* w = weights_[l].data();
        const auto& cur = acts.back();
        for (std::size_t j = 0; j < out; ++j) {
            double acc = biases_[l][j];
            const double* row = w + j * in;
            for (std::size_t i = 0; i < in; ++i) acc += row[i] * cur[i];
            next[j] = (l + 1 < weights_.size() && acc < 0.0) ? 0.0 : acc;
        }
        acts.push_back(std::move(next));
    }
    return acts;
}

std::size_t QNetwork::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l)
        n += weights_[l].size() + biases_[l].size();
    return n;
}

double QNetwork::get_parameter(std::size_t index) const {
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        if (index < weights_[l].size()) return weights_[l][index];
        index -= weights_[l].size();
        if (index < biases_[l].size()) return biases_[l][index];
        index -= biases_[l].size();
    }
    throw std::out_of_range("QNetwork::get_parameter");
}

void QNetwork::set_parameter(std::size_t index, double value) {
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        if (index < weights_[l].size()) {
            weights_[l][index] = value;
            return;
        }
        index -= weights_[l].size();
        if (index < biases_[l].size()) {
            biases_[l][index] = value;
            return;
        }
        index -= biases_[l].size();
    }
    throw std::out_of_range("QNetwork::set_parameter");
}

double batch_loss(const QNetwork& net, std::span<const Transition> batch,
                  std::span<const double> targets) {
    if (batch.empty() || batch.size() != targets.size())
        throw std::invalid_argument("batch_loss: batch/target size mismatch");
    double loss = 0.0;
    for (std::size_t b = 0; b < batch.size(); ++b) {
        double q = net.forward(batch[b].state)[static_cast<std::size_t>(batch[b].action)];
        double err = q - targets[b];
        loss += err * err;
    }
    return loss / static_cast<double>(batch.size());
}

Gradients batch_gradients(const QNetwork& net, std::span<const Transition> batch,
                          std::span<const double> targets, double* loss_out) {
    if (batch.empty() || batch.size() != targets.size())
        throw std::invalid_argument("batch_gradients: batch/target size mismatch");

    Gradients grads;
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        grads.weights.emplace_back(net.weights(l).size(), 0.0);
        grads.biases.emplace_back(net.biases(l).size(), 0.0);
    }

    const auto& sizes = net.sizes();
    double loss = 0.0;
    for (std::size_t b = 0; b < batch.size(); ++b) {
        auto acts = net.forward_cached(batch[b].state);
        auto action = static_cast<std::size_t>(batch[b].action);
        double err = acts.back()[action] - targets[b];
        loss += err * err;

        // Output delta: only the taken action carries error.
        std::vector<double> delta(acts.back().size(), 0.0);
        delta[action] = 2.0 * err / static_cast<double>(batch.size());

        for (std::size_t l = net.layer_count(); l-- > 0;) {
            auto in = static_cast<std::size_t>(sizes[l]);
            auto out = static_cast<std::size_t>(sizes[l + 1]);
            const auto& below = acts[l];
            auto& gw = grads.weights[l];
            auto& gb = grads.biases[l];
            for (std::size_t j = 0; j < out; ++j) {
                if (delta[j] == 0.0) continue;
                gb[j] += delta[j];
                double* row = gw.data() + j * in;
                for (std::size_t i = 0; i < in; ++i) row[i] += delta[j] * below[i];
            }
            if (l == 0) break;
            std::vector<double> prev(in, 0.0);
            const auto& w = net.weights(l);
            for (std::size_t j = 0; j < out; ++j) {
                if (delta[j] == 0.0) continue;
                const double* row = w.data() + j * in;
                for (std::size_t i = 0; i < in; ++i) prev[i] += row[i] * delta[j];
            }
            // ReLU derivative via the cached post-activation values.
            for (std::size_t i = 0; i < in; ++i) {
                if (acts[l][i] <= 0.0) prev[i] = 0.0;
            }
            delta = std::move(prev);
        }
    }
    if (loss_out) *loss_out = loss / static_cast<double>(batch.size());
    return grads;
}

Adam::Adam(double learning_rate, std::size_t parameter_count, double beta1, double beta2,
           double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon),
      m_(parameter_count, 0.0), v_(parameter_count, 0.0) {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("Adam: learning rate must be > 0");
}

void Adam::step(QNetwork& net, const Gradients& grads) {
    ++t_;
    double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    std::size_t idx = 0;
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        auto apply = [&](std::vector<double>& params, const std::vector<double>& g) {
            for (std::size_t i = 0; i < params.size(); ++i, ++idx) {
                m_[idx] = beta1_ * m_[idx] + (1.0 - beta1_) * g[i];
                v_[idx] = beta2_ * v_[idx] + (1.0 - beta2_) * g[i] * g[i];
                double mhat = m_[idx] / bc1;
                double vhat = v_[idx] / bc2;
                params[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
            }
        };
        apply(net.weights(l), grads.weights[l]);
        apply(net.biases(l), grads.biases[l]);
    }
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity < 1) throw std::invalid_argument("ReplayBuffer: capacity must be >= 1");
    store_.reserve(capacity);
}

void ReplayBuffer::add(Transition t) {
    if (t.reward < -1 || t.reward > 1)
        throw std::invalid_argument("ReplayBuffer: reward must be in {-1, 0, +1}");
    if (store_.size() < capacity_) {
        store_.push_back(std::move(t));
    } else {
        store_[next_] = std::move(t);
    }
    next_ = (next_ + 1) % capacity_;
}

std::vector<Transition> ReplayBuffer::sample(std::size_t batch, RandomStream& rng) const {
    if (store_.size() < batch)
        throw std::logic_error("ReplayBuffer: sample before buffer reaches batch size");
    std::vector<Transition> out;
    out.reserve(batch);
    for (std::size_t i = 0; i < batch; ++i)
        out.push_back(store_[rng.next_below(store_.size())]);
    return out;
}

void AgentConfig::validate() const {
    if (input_dim < 1) throw std::invalid_argument("agent: input_dim must be >= 1");
    if (hidden_layers.empty()) throw std::invalid_argument("agent: need hidden layers");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("agent: learning_rate must be > 0");
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw std::invalid_argument("agent: gamma must be in (0, 1)");
    if (batch_size < 1 || buffer_capacity < batch_size)
        throw std::invalid_argument("agent: buffer must hold at least one batch");
    if (warmup < batch_size) throw std::invalid_argument("agent: warmup below batch size");
}

namespace {

std::vector<int> full_sizes(const AgentConfig& config) {
    std::vector<int> sizes;
    sizes.push_back(config.input_dim);
    sizes.insert(sizes.end(), config.hidden_layers.begin(), config.hidden_layers.end());
    sizes.push_back(kActionCount);
    return sizes;
}

const AgentConfig& validated(const AgentConfig& config) {
    config.validate();
    return config;
}

}  // namespace

DqnAgent::DqnAgent(const AgentConfig& config)
    : config_(validated(config)),
      online_(full_sizes(config_), config_.seed),
      target_(full_sizes(config_), config_.seed),
      buffer_(config_.buffer_capacity),
      adam_(config_.learning_rate, online_.parameter_count()),
      rng_(combine_seed(config_.seed, 0xA6E7)) {}

double DqnAgent::epsilon() const {
    if (config_.epsilon_decay_steps == 0) return config_.epsilon_end;
    double frac = static_cast<double>(decisions_) /
                  static_cast<double>(config_.epsilon_decay_steps);
    if (frac > 1.0) frac = 1.0;
    return config_.epsilon_start + (config_.epsilon_end - config_.epsilon_start) * frac;
}

int DqnAgent::select_action(std::span<const double> state, bool explore) {
    if (explore) {
        double eps = epsilon();
        ++decisions_;
        if (rng_.next_unit() < eps)
            return static_cast<int>(rng_.next_below(kActionCount));
    }
    std::vector<double> q = online_.forward(state);
    int best = 0;
    for (int a = 1; a < kActionCount; ++a) {
        if (q[static_cast<std::size_t>(a)] > q[static_cast<std::size_t>(best)]) best = a;
    }
    return best;
}

void DqnAgent::observe(Transition t) {
    if (static_cast<int>(t.state.size()) != config_.input_dim ||
        static_cast<int>(t.next_state.size()) != config_.input_dim)
        throw std::invalid_argument("observe: state dimension mismatch");
    if (t.action < 0 || t.action >= kActionCount)
        throw std::invalid_argument("observe: action out of range");
    buffer_.add(std::move(t));
}

std::optional<double> DqnAgent::maybe_train() {
    if (buffer_.size() < config_.warmup || buffer_.size() < config_.batch_size)
        return std::nullopt;

    std::vector<Transition> batch = buffer_.sample(config_.batch_size, rng_);
    std::vector<double> targets;
    targets.reserve(batch.size());
    for (const auto& t : batch) {
        double y = t.reward;
        if (!t.terminal) {
            std::vector<double> q = target_.forward(t.next_state);
            y += config_.gamma * *std::max_element(q.begin(), q.end());
        }
        targets.push_back(y);
    }

    double loss = 0.0;
    Gradients grads = batch_gradients(online_, batch, targets, &loss);
    if (!std::isfinite(loss))
        throw std::runtime_error("dqn: training loss diverged (non-finite)");
    adam_.step(online_, grads);
    ++train_steps_;
    if (train_steps_ % config_.target_sync_period == 0) target_ = online_;
    return loss;
}

namespace {

constexpr char kCheckpointMagic[4] = {'B', 'F', 'Q', '1'};

void write_u32(std::ofstream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::ifstream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_f64(std::ofstream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

double read_f64(std::ifstream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

void DqnAgent::save_checkpoint(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path.string());
    out.write(kCheckpointMagic, 4);
    write_u32(out, static_cast<std::uint32_t>(online_.sizes().size()));
    for (int s : online_.sizes()) write_u32(out, static_cast<std::uint32_t>(s));
    for (std::size_t l = 0; l < online_.layer_count(); ++l) {
        for (double w : online_.weights(l)) write_f64(out, w);
        for (double b : online_.biases(l)) write_f64(out, b);
    }
    if (!out) throw std::runtime_error("checkpoint write failed: " + path.string());
}

void DqnAgent::load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read checkpoint: " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kCheckpointMagic, 4) != 0)
        throw std::runtime_error("bad checkpoint magic: " + path.string());
    std::uint32_t n_sizes = read_u32(in);
    std::vector<int> sizes(n_sizes);
    for (auto& s : sizes) s = static_cast<int>(read_u32(in));
    if (sizes != online_.sizes())
        throw std::runtime_error("checkpoint layer sizes do not match agent: " + path.string());
    for (std::size_t l = 0; l < online_.layer_count(); ++l) {
        for (double& w : online_.weights(l)) w = read_f64(in);
        for (double& b : online_.biases(l)) b = read_f64(in);
    }
    if (!in) throw std::runtime_error("checkpoint truncated: " + path.string());
    target_ = online_;
}

}  // namespace bloomflow
