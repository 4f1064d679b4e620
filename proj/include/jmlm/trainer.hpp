#pragma once

// Single-process MLM training loop: Adam moment estimates with bias
// correction followed by decoupled weight-decay shrinkage (scaled by the
// learning rate, matching the optimizer the reference stacks ship). Decay
// never touches biases or layer-norm parameters. Fully deterministic given
// the seed and batch order.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jmlm/errors.hpp"
#include "jmlm/masking.hpp"
#include "jmlm/model.hpp"

namespace jmlm {

class NonFiniteLoss : public DataError {
public:
    explicit NonFiniteLoss(std::int64_t step)
        : DataError("train-error",
                    "non-finite loss at step " + std::to_string(step)),
          step_(step) {}
    std::int64_t step() const noexcept { return step_; }

private:
    std::int64_t step_;
};

struct TrainConfig {
    double learning_rate = 5e-5;
    std::int64_t batch_size = 30;
    std::int64_t epochs = 1;
    double weight_decay = 0.01;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;
    std::int64_t log_every = 10;
    bool use_dropout = true; // dropout still requires config.dropout > 0

    void validate() const {
        if (learning_rate < 0.0) throw ConfigError("learning_rate must be non-negative");
        if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
        if (epochs < 1) throw ConfigError("epochs must be at least 1");
        if (log_every < 1) throw ConfigError("log_every must be at least 1");
        if (adam_beta1 < 0.0 || adam_beta1 >= 1.0 || adam_beta2 < 0.0 || adam_beta2 >= 1.0) {
            throw ConfigError("adam betas must lie in [0, 1)");
        }
    }
};

struct TrainStepRecord {
    std::int64_t step = 0; // 1-based, strictly increasing
    double loss = 0.0;
    std::int64_t tokens_seen = 0; // cumulative attended tokens
    double elapsed_s = 0.0;
};

struct TrainLog {
    std::vector<TrainStepRecord> records;
    std::int64_t total_steps = 0;
    double final_loss = 0.0;
};

// Adam with decoupled weight decay over the parameter-shaped tensors.
class AdamW {
public:
    AdamW(const EncoderParams& params, const TrainConfig& cfg)
        : cfg_(cfg), m_(make_like(params)), v_(make_like(params)) {}

    // One update step. Gradients are consumed read-only; `params` is updated
    // in place: Adam first, then the decay shrinkage on decayable tensors.
    void step(EncoderParams& params, const EncoderParams& grads) {
        ++t_;
        const double bc1 = 1.0 - std::pow(cfg_.adam_beta1, double(t_));
        const double bc2 = 1.0 - std::pow(cfg_.adam_beta2, double(t_));

        std::vector<Tensor*> ps, gs, ms, vs;
        std::vector<bool> no_decay;
        for_each_tensor(params, [&](const std::string&, Tensor& t, bool nd) {
            ps.push_back(&t);
            no_decay.push_back(nd);
        });
        for_each_tensor(const_cast<EncoderParams&>(grads),
                        [&](const std::string&, Tensor& t, bool) { gs.push_back(&t); });
        for_each_tensor(m_, [&](const std::string&, Tensor& t, bool) { ms.push_back(&t); });
        for_each_tensor(v_, [&](const std::string&, Tensor& t, bool) { vs.push_back(&t); });

        for (std::size_t ti = 0; ti < ps.size(); ++ti) {
            auto& p = ps[ti]->data;
            const auto& g = gs[ti]->data;
            auto& m = ms[ti]->data;
            auto& v = vs[ti]->data;
            const double decay =
                no_decay[ti] ? 0.0 : cfg_.learning_rate * cfg_.weight_decay;
            for (std::size_t i = 0; i < p.size(); ++i) {
                m[i] = cfg_.adam_beta1 * m[i] + (1.0 - cfg_.adam_beta1) * g[i];
                v[i] = cfg_.adam_beta2 * v[i] + (1.0 - cfg_.adam_beta2) * g[i] * g[i];
                const double m_hat = m[i] / bc1;
                const double v_hat = v[i] / bc2;
                p[i] -= cfg_.learning_rate * m_hat / (std::sqrt(v_hat) + cfg_.adam_eps);
                p[i] -= decay * p[i];
            }
        }
    }

    std::int64_t steps() const noexcept { return t_; }

private:
    TrainConfig cfg_;
    EncoderParams m_;
    EncoderParams v_;
    std::int64_t t_ = 0;
};

// Deterministic batch source. reset(epoch) rewinds for the given epoch; the
// stream then yields each batch once. Masking seeds advance monotonically
// across epochs (base seed + global batch counter), so later epochs see
// fresh mask patterns while everything stays reproducible.
class BatchSource {
public:
    virtual ~BatchSource() = default;
    virtual void reset(std::int64_t epoch) = 0;
    virtual bool next(MaskedBatch& out) = 0;
};

// Batches pre-chunked examples: shuffles the example order once with the
// shuffle seed, partitions into fixed-size batches, and masks each batch on
// demand.
class MaskingBatchSource : public BatchSource {
public:
    MaskingBatchSource(std::vector<std::vector<std::int32_t>> examples, const Vocabulary& vocab,
                       MaskingConfig masking, std::int64_t batch_size, bool shuffle)
        : examples_(std::move(examples)), vocab_(&vocab), masking_(masking),
          batch_size_(batch_size) {
        if (shuffle) {
            Rng rng(masking_.seed);
            rng.shuffle(examples_);
        }
    }

    std::int64_t batches_per_epoch() const {
        return (std::int64_t(examples_.size()) + batch_size_ - 1) / batch_size_;
    }

    void reset(std::int64_t epoch) override {
        cursor_ = 0;
        batch_index_ = 0;
        epoch_ = epoch;
    }

    bool next(MaskedBatch& out) override {
        if (cursor_ >= std::int64_t(examples_.size())) return false;
        const auto end = std::min<std::int64_t>(cursor_ + batch_size_,
                                                std::int64_t(examples_.size()));
        std::vector<std::vector<std::int32_t>> chunk(examples_.begin() + cursor_,
                                                     examples_.begin() + end);
        cursor_ = end;
        MaskingConfig cfg = masking_;
        // Per-batch seed: base + batch index, offset per epoch so later
        // epochs re-mask while any given epoch replays identically.
        cfg.seed = masking_.seed + std::uint64_t(epoch_ * batches_per_epoch() + batch_index_);
        ++batch_index_;
        out = mask(chunk, *vocab_, cfg);
        return true;
    }

private:
    std::vector<std::vector<std::int32_t>> examples_;
    const Vocabulary* vocab_;
    MaskingConfig masking_;
    std::int64_t batch_size_ = 0;
    std::int64_t cursor_ = 0;
    std::int64_t epoch_ = 0;
    std::int64_t batch_index_ = 0;
};

// Runs the training loop over cfg.epochs passes of the batch source.
// Optional per-step callback receives (step, loss) after each update.
inline TrainLog train(EncoderParams& params, BatchSource& batches, const TrainConfig& cfg,
                      const std::function<void(std::int64_t, double)>& on_step = {}) {
    cfg.validate();
    AdamW optimizer(params, cfg);
    TrainLog log;
    std::int64_t step = 0;
    std::int64_t tokens_seen = 0;
    const auto start = std::chrono::steady_clock::now();
    auto grads = make_like(params);

    for (std::int64_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        batches.reset(epoch);
        MaskedBatch batch;
        while (batches.next(batch)) {
            ++step;
            ForwardCache cache;
            const std::optional<std::uint64_t> dropout_seed =
                (cfg.use_dropout && params.config.dropout > 0.0)
                    ? std::optional<std::uint64_t>(cfg.seed + std::uint64_t(step))
                    : std::nullopt;
            forward(params, batch, cache, dropout_seed);
            jmlm::for_each_tensor(grads, [](const std::string&, Tensor& t, bool) { t.zero(); });
            const double loss = mlm_loss_and_backward(params, cache, batch, grads);
            if (!std::isfinite(loss)) throw NonFiniteLoss(step);
            optimizer.step(params, grads);

            for (const auto a : batch.attention_mask.data) tokens_seen += a;
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
            log.final_loss = loss;
            log.total_steps = step;
            if (step % cfg.log_every == 0 || step == 1) {
                log.records.push_back({step, loss, tokens_seen, elapsed});
            }
            if (on_step) on_step(step, loss);
        }
    }
    return log;
}

// Mean of per-batch losses over one pass; parameters are untouched.
inline double evaluate_loss(const EncoderParams& params, BatchSource& batches) {
    batches.reset(0);
    MaskedBatch batch;
    double total = 0.0;
    std::int64_t n = 0;
    while (batches.next(batch)) {
        ForwardCache cache;
        total += mlm_loss(forward(params, batch, cache), batch.labels);
        ++n;
    }
    if (n == 0) throw NoMaskedPositions();
    return total / double(n);
}

// CSV: one row per logged step plus a gnuplot-friendly loss curve file.
inline void save_train_log(const TrainLog& log, const std::filesystem::path& csv_path,
                           const std::filesystem::path& curve_path) {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw IoError("cannot write train log " + csv_path.string());
    csv << "step,loss,tokens_seen,elapsed_s\n";
    for (const auto& r : log.records) {
        csv << r.step << ',' << r.loss << ',' << r.tokens_seen << ',' << r.elapsed_s << '\n';
    }
    std::ofstream curve(curve_path, std::ios::binary);
    if (!curve) throw IoError("cannot write loss curve " + curve_path.string());
    curve << "# step loss\n";
    for (const auto& r : log.records) curve << r.step << ' ' << r.loss << '\n';
}

} // namespace jmlm
