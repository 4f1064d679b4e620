#pragma once

// Bidirectional transformer encoder with a tied-embedding language-modeling
// head: post-layer-norm residual blocks, exact-erf GELU, masked softmax
// attention, and a hand-written backward pass for every parameter. All math
// runs in double precision; checkpoints store float32.
//
// The output projection of the LM head IS the word-embedding table (one
// tensor, used twice), so its gradient accumulates from both the input
// gather and the output projection.
//
// Determinism: parallel regions partition output elements disjointly (rows
// for GEMMs, (batch, head) slices for attention) and keep a fixed summation
// order, so identical inputs give bit-identical results at any thread count.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jmlm/errors.hpp"
#include "jmlm/masking.hpp"
#include "jmlm/rng.hpp"
#include "jmlm/tensor.hpp"

namespace jmlm {

inline constexpr double kLayerNormEps = 1e-12;
inline constexpr double kInitStdDev = 0.02;

class NoMaskedPositions : public DataError {
public:
    NoMaskedPositions() : DataError("data-error", "batch has no labeled positions") {}
};

struct EncoderConfig {
    int num_layers = 12;
    int hidden = 768;
    int num_heads = 12;
    int intermediate = 3072; // 4 * hidden by convention
    int vocab_size = 0;
    int max_positions = 512;
    int type_vocab = 2;
    double dropout = 0.0;

    void validate() const {
        if (num_layers < 1 || hidden < 1 || num_heads < 1 || intermediate < 1 ||
            vocab_size < 1 || max_positions < 1 || type_vocab < 1) {
            throw ConfigError("encoder config sizes must all be at least 1");
        }
        if (hidden % num_heads != 0) {
            throw ConfigError("hidden size must be divisible by the head count");
        }
        if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("dropout must lie in [0, 1)");
    }

    int head_dim() const { return hidden / num_heads; }

    static EncoderConfig bert_base(int vocab) {
        EncoderConfig cfg;
        cfg.vocab_size = vocab;
        return cfg;
    }

    // Small enough to learn fixture corpora in minutes on a CPU.
    static EncoderConfig desk_default(int vocab) {
        EncoderConfig cfg;
        cfg.num_layers = 2;
        cfg.hidden = 128;
        cfg.num_heads = 4;
        cfg.intermediate = 512;
        cfg.max_positions = 128;
        cfg.vocab_size = vocab;
        return cfg;
    }
};

struct EncoderLayerParams {
    Tensor wq, bq, wk, bk, wv, bv; // (H,H) and (H)
    Tensor wo, bo;
    Tensor attn_ln_g, attn_ln_b;
    Tensor w1, b1; // (H,I), (I)
    Tensor w2, b2; // (I,H), (H)
    Tensor ffn_ln_g, ffn_ln_b;
};

struct EncoderParams {
    EncoderConfig config;
    Tensor word_emb; // (V,H); also the LM-head output projection (tied)
    Tensor pos_emb;  // (P,H)
    Tensor type_emb; // (T,H)
    Tensor emb_ln_g, emb_ln_b;
    std::vector<EncoderLayerParams> layers;
    Tensor head_w, head_b;       // (H,H), (H)
    Tensor head_ln_g, head_ln_b; // (H)
    Tensor out_bias;             // (V)
};

// Visits every parameter tensor in a fixed order: (name, tensor, no_decay).
// Layer norms and biases are flagged no_decay.
template <typename Params, typename Fn>
void for_each_tensor(Params& params, Fn&& fn) {
    fn("embeddings.word", params.word_emb, false);
    fn("embeddings.position", params.pos_emb, false);
    fn("embeddings.token_type", params.type_emb, false);
    fn("embeddings.layer_norm.scale", params.emb_ln_g, true);
    fn("embeddings.layer_norm.offset", params.emb_ln_b, true);
    for (std::size_t i = 0; i < params.layers.size(); ++i) {
        auto& layer = params.layers[i];
        const std::string prefix = "layer" + std::to_string(i) + ".";
        fn(prefix + "attention.query.weight", layer.wq, false);
        fn(prefix + "attention.query.bias", layer.bq, true);
        fn(prefix + "attention.key.weight", layer.wk, false);
        fn(prefix + "attention.key.bias", layer.bk, true);
        fn(prefix + "attention.value.weight", layer.wv, false);
        fn(prefix + "attention.value.bias", layer.bv, true);
        fn(prefix + "attention.output.weight", layer.wo, false);
        fn(prefix + "attention.output.bias", layer.bo, true);
        fn(prefix + "attention.layer_norm.scale", layer.attn_ln_g, true);
        fn(prefix + "attention.layer_norm.offset", layer.attn_ln_b, true);
        fn(prefix + "ffn.intermediate.weight", layer.w1, false);
        fn(prefix + "ffn.intermediate.bias", layer.b1, true);
        fn(prefix + "ffn.output.weight", layer.w2, false);
        fn(prefix + "ffn.output.bias", layer.b2, true);
        fn(prefix + "ffn.layer_norm.scale", layer.ffn_ln_g, true);
        fn(prefix + "ffn.layer_norm.offset", layer.ffn_ln_b, true);
    }
    fn("lm_head.transform.weight", params.head_w, false);
    fn("lm_head.transform.bias", params.head_b, true);
    fn("lm_head.layer_norm.scale", params.head_ln_g, true);
    fn("lm_head.layer_norm.offset", params.head_ln_b, true);
    fn("lm_head.output.bias", params.out_bias, true);
}

inline EncoderParams make_shaped(const EncoderConfig& config) {
    config.validate();
    const std::int64_t H = config.hidden;
    const std::int64_t I = config.intermediate;
    EncoderParams p;
    p.config = config;
    p.word_emb = Tensor{config.vocab_size, H};
    p.pos_emb = Tensor{config.max_positions, H};
    p.type_emb = Tensor{config.type_vocab, H};
    p.emb_ln_g = Tensor{H};
    p.emb_ln_b = Tensor{H};
    p.layers.resize(std::size_t(config.num_layers));
    for (auto& layer : p.layers) {
        layer.wq = Tensor{H, H};
        layer.bq = Tensor{H};
        layer.wk = Tensor{H, H};
        layer.bk = Tensor{H};
        layer.wv = Tensor{H, H};
        layer.bv = Tensor{H};
        layer.wo = Tensor{H, H};
        layer.bo = Tensor{H};
        layer.attn_ln_g = Tensor{H};
        layer.attn_ln_b = Tensor{H};
        layer.w1 = Tensor{H, I};
        layer.b1 = Tensor{I};
        layer.w2 = Tensor{I, H};
        layer.b2 = Tensor{H};
        layer.ffn_ln_g = Tensor{H};
        layer.ffn_ln_b = Tensor{H};
    }
    p.head_w = Tensor{H, H};
    p.head_b = Tensor{H};
    p.head_ln_g = Tensor{H};
    p.head_ln_b = Tensor{H};
    p.out_bias = Tensor{config.vocab_size};
    return p;
}

// Zeroed parameter-shaped structure, used for gradients and moments.
inline EncoderParams make_like(const EncoderParams& params) {
    return make_shaped(params.config);
}

// Weights: truncated normal (sigma 0.02, cut at two sigma). Biases zero,
// layer-norm scales one. Deterministic in the seed.
inline EncoderParams init_params(const EncoderConfig& config, std::uint64_t seed) {
    EncoderParams params = make_shaped(config);
    Rng rng(seed);
    for_each_tensor(params, [&](const std::string& name, Tensor& tensor, bool) {
        const bool is_scale = name.find("layer_norm.scale") != std::string::npos;
        const bool is_weight = name.find("bias") == std::string::npos &&
                               name.find("layer_norm") == std::string::npos;
        if (is_weight) {
            for (auto& v : tensor.data) v = rng.truncated_normal(kInitStdDev);
        } else if (is_scale) {
            tensor.fill(1.0);
        } // biases and layer-norm offsets stay zero
    });
    return params;
}

inline std::int64_t count_parameters(const EncoderConfig& config) {
    config.validate();
    const std::int64_t V = config.vocab_size;
    const std::int64_t H = config.hidden;
    const std::int64_t I = config.intermediate;
    const std::int64_t P = config.max_positions;
    const std::int64_t T = config.type_vocab;
    const std::int64_t embeddings = V * H + P * H + T * H + 2 * H;
    const std::int64_t attention = 4 * (H * H + H) + 2 * H;
    const std::int64_t ffn = (H * I + I) + (I * H + H) + 2 * H;
    const std::int64_t head = (H * H + H) + 2 * H + V; // tied projection not re-counted
    return embeddings + config.num_layers * (attention + ffn) + head;
}

namespace detail {

inline double gelu(double x) { return 0.5 * x * std::erfc(-x * 0.7071067811865475244); }

inline double gelu_grad(double x) {
    const double phi = 0.5 * std::erfc(-x * 0.7071067811865475244);
    const double pdf = 0.3989422804014326779 * std::exp(-0.5 * x * x);
    return phi + x * pdf;
}

struct LnCache {
    Tensor x_hat;                // (R,H)
    std::vector<double> inv_std; // (R)
};

// y = g * (x - mean) / sqrt(var + eps) + b, row-wise.
inline void layer_norm(const Tensor& x, const Tensor& g, const Tensor& b, Tensor& y,
                       LnCache& cache) {
    const std::int64_t R = x.shape[0];
    const std::int64_t H = x.shape[1];
    cache.x_hat = Tensor{R, H};
    cache.inv_std.assign(std::size_t(R), 0.0);
    for (std::int64_t r = 0; r < R; ++r) {
        const double* row = x.ptr() + r * H;
        double mean = 0.0;
        for (std::int64_t j = 0; j < H; ++j) mean += row[j];
        mean /= double(H);
        double var = 0.0;
        for (std::int64_t j = 0; j < H; ++j) {
            const double diff = row[j] - mean;
            var += diff * diff;
        }
        var /= double(H);
        const double inv = 1.0 / std::sqrt(var + kLayerNormEps);
        cache.inv_std[std::size_t(r)] = inv;
        double* xh = cache.x_hat.ptr() + r * H;
        double* out = y.ptr() + r * H;
        for (std::int64_t j = 0; j < H; ++j) {
            xh[j] = (row[j] - mean) * inv;
            out[j] = g.at(j) * xh[j] + b.at(j);
        }
    }
}

inline void layer_norm_backward(const Tensor& dy, const Tensor& g, const LnCache& cache,
                                Tensor& dx, Tensor& dg, Tensor& db) {
    const std::int64_t R = dy.shape[0];
    const std::int64_t H = dy.shape[1];
    for (std::int64_t r = 0; r < R; ++r) {
        const double* dyr = dy.ptr() + r * H;
        const double* xh = cache.x_hat.ptr() + r * H;
        const double inv = cache.inv_std[std::size_t(r)];
        double m1 = 0.0, m2 = 0.0;
        for (std::int64_t j = 0; j < H; ++j) {
            const double dxh = dyr[j] * g.at(j);
            m1 += dxh;
            m2 += dxh * xh[j];
        }
        m1 /= double(H);
        m2 /= double(H);
        double* dxr = dx.ptr() + r * H;
        for (std::int64_t j = 0; j < H; ++j) {
            const double dxh = dyr[j] * g.at(j);
            dxr[j] = inv * (dxh - m1 - xh[j] * m2);
            dg.at(j) += dyr[j] * xh[j];
            db.at(j) += dyr[j];
        }
    }
}

inline void add_bias(Tensor& x, const Tensor& b) {
    const std::int64_t R = x.shape[0];
    const std::int64_t C = x.shape[1];
    for (std::int64_t r = 0; r < R; ++r) {
        double* row = x.ptr() + r * C;
        for (std::int64_t j = 0; j < C; ++j) row[j] += b.at(j);
    }
}

inline void bias_grad(const Tensor& dy, Tensor& db) {
    const std::int64_t R = dy.shape[0];
    const std::int64_t C = dy.shape[1];
    for (std::int64_t r = 0; r < R; ++r) {
        const double* row = dy.ptr() + r * C;
        for (std::int64_t j = 0; j < C; ++j) db.at(j) += row[j];
    }
}

// Inverted dropout: mask entries are 0 or 1/(1-p). The mask is drawn here
// but applied by the caller, so cached activations can stay pre-dropout.
inline Tensor draw_dropout_mask(const std::vector<std::int64_t>& shape, double p, Rng& rng) {
    Tensor mask{shape};
    const double scale = 1.0 / (1.0 - p);
    for (auto& m : mask.data) m = rng.bernoulli(p) ? 0.0 : scale;
    return mask;
}

struct LayerCache {
    Tensor x_in; // (R,H) layer input
    Tensor q, k, v;
    Tensor probs;   // (B*heads, L, L), pre-dropout softmax
    Tensor ctx;     // (R,H), computed with dropped probabilities
    LnCache ln1;
    Tensor x_mid;   // (R,H) post-attention layer norm
    Tensor ffn_pre; // (R,I)
    Tensor ffn_act; // (R,I)
    LnCache ln2;
    Tensor x_out;   // (R,H)
    Tensor drop_probs, drop_attn, drop_ffn; // masks when dropout is active
};

} // namespace detail

struct ForwardCache {
    std::int64_t B = 0, L = 0, R = 0;
    detail::LnCache emb_ln;
    Tensor emb_drop_mask;
    std::vector<detail::LayerCache> layers;
    Tensor head_pre; // (R,H)
    Tensor head_act; // (R,H)
    detail::LnCache head_ln;
    Tensor head_out; // (R,H)
    Tensor logits;   // (B,L,V) stored flat as (R,V)
};

// Runs the encoder and LM head over one batch. `dropout_seed` enables the
// configured dropout (training mode); leave it empty for evaluation and
// gradient checks. Returns cache.logits.
inline const Tensor& forward(const EncoderParams& params, const MaskedBatch& batch,
                             ForwardCache& cache,
                             std::optional<std::uint64_t> dropout_seed = {}) {
    const EncoderConfig& cfg = params.config;
    const std::int64_t B = batch.input_ids.rows;
    const std::int64_t L = batch.input_ids.cols;
    const std::int64_t R = B * L;
    const std::int64_t H = cfg.hidden;
    const std::int64_t heads = cfg.num_heads;
    const std::int64_t d = cfg.head_dim();
    if (L > cfg.max_positions) throw ShapeMismatch("sequence longer than max_positions");
    for (const auto id : batch.input_ids.data) {
        if (id < 0 || id >= cfg.vocab_size) throw ShapeMismatch("input id outside vocabulary");
    }
    const bool training = dropout_seed.has_value() && cfg.dropout > 0.0;
    Rng drop_rng(dropout_seed.value_or(0));

    cache.B = B;
    cache.L = L;
    cache.R = R;
    cache.emb_drop_mask = Tensor{};
    cache.layers.assign(std::size_t(cfg.num_layers), {});

    // Embedding sum + layer norm (+ dropout in training).
    Tensor x{R, H};
    for (std::int64_t b = 0; b < B; ++b) {
        for (std::int64_t l = 0; l < L; ++l) {
            const std::int64_t r = b * L + l;
            const auto id = batch.input_ids.at(b, l);
            const double* we = params.word_emb.ptr() + std::int64_t(id) * H;
            const double* pe = params.pos_emb.ptr() + l * H;
            const double* te = params.type_emb.ptr(); // single segment type
            double* row = x.ptr() + r * H;
            for (std::int64_t j = 0; j < H; ++j) row[j] = we[j] + pe[j] + te[j];
        }
    }
    Tensor x_normed{R, H};
    detail::layer_norm(x, params.emb_ln_g, params.emb_ln_b, x_normed, cache.emb_ln);
    if (training) {
        cache.emb_drop_mask = detail::draw_dropout_mask(x_normed.shape, cfg.dropout, drop_rng);
        for (std::int64_t i = 0; i < R * H; ++i) x_normed.at(i) *= cache.emb_drop_mask.at(i);
    }

    Tensor current = std::move(x_normed);
    for (std::int64_t li = 0; li < cfg.num_layers; ++li) {
        auto& lc = cache.layers[std::size_t(li)];
        const auto& lp = params.layers[std::size_t(li)];
        lc.x_in = current;

        lc.q = Tensor{R, H};
        lc.k = Tensor{R, H};
        lc.v = Tensor{R, H};
        matmul_nn(R, H, H, lc.x_in.ptr(), lp.wq.ptr(), lc.q.ptr());
        detail::add_bias(lc.q, lp.bq);
        matmul_nn(R, H, H, lc.x_in.ptr(), lp.wk.ptr(), lc.k.ptr());
        detail::add_bias(lc.k, lp.bk);
        matmul_nn(R, H, H, lc.x_in.ptr(), lp.wv.ptr(), lc.v.ptr());
        detail::add_bias(lc.v, lp.bv);

        lc.probs = Tensor{B * heads, L, L};
        if (training) {
            lc.drop_probs = detail::draw_dropout_mask(lc.probs.shape, cfg.dropout, drop_rng);
        }
        lc.ctx = Tensor{R, H};
        const double scale = 1.0 / std::sqrt(double(d));
        // Each (b, h) iteration owns the head-h column block of batch b's rows
        // in ctx, so the parallel loop is race-free and deterministic.
#pragma omp parallel for schedule(static) collapse(2)
        for (std::int64_t b = 0; b < B; ++b) {
            for (std::int64_t h = 0; h < heads; ++h) {
                double* probs = lc.probs.ptr() + (b * heads + h) * L * L;
                const double* pmask =
                    training ? lc.drop_probs.ptr() + (b * heads + h) * L * L : nullptr;
                for (std::int64_t i = 0; i < L; ++i) {
                    double* prow = probs + i * L;
                    const double* qi = lc.q.ptr() + (b * L + i) * H + h * d;
                    double maxs = -1e300;
                    for (std::int64_t j = 0; j < L; ++j) {
                        if (batch.attention_mask.at(b, j) == 0) {
                            prow[j] = 0.0;
                            continue;
                        }
                        const double* kj = lc.k.ptr() + (b * L + j) * H + h * d;
                        double s = 0.0;
                        for (std::int64_t t = 0; t < d; ++t) s += qi[t] * kj[t];
                        s *= scale;
                        prow[j] = s;
                        if (s > maxs) maxs = s;
                    }
                    double denom = 0.0;
                    for (std::int64_t j = 0; j < L; ++j) {
                        if (batch.attention_mask.at(b, j) == 0) continue;
                        prow[j] = std::exp(prow[j] - maxs);
                        denom += prow[j];
                    }
                    if (denom > 0.0) {
                        for (std::int64_t j = 0; j < L; ++j) prow[j] /= denom;
                    }
                    // Context for position i: dropped probabilities times values.
                    double* out = lc.ctx.ptr() + (b * L + i) * H + h * d;
                    for (std::int64_t t = 0; t < d; ++t) out[t] = 0.0;
                    for (std::int64_t j = 0; j < L; ++j) {
                        double p = prow[j];
                        if (pmask) p *= pmask[i * L + j];
                        if (p == 0.0) continue;
                        const double* vj = lc.v.ptr() + (b * L + j) * H + h * d;
                        for (std::int64_t t = 0; t < d; ++t) out[t] += p * vj[t];
                    }
                }
            }
        }

        Tensor attn_dense{R, H};
        matmul_nn(R, H, H, lc.ctx.ptr(), lp.wo.ptr(), attn_dense.ptr());
        detail::add_bias(attn_dense, lp.bo);
        if (training) {
            lc.drop_attn = detail::draw_dropout_mask(attn_dense.shape, cfg.dropout, drop_rng);
            for (std::int64_t i = 0; i < R * H; ++i) attn_dense.at(i) *= lc.drop_attn.at(i);
        }

        Tensor sum1{R, H};
        for (std::int64_t i = 0; i < R * H; ++i) sum1.at(i) = lc.x_in.at(i) + attn_dense.at(i);
        lc.x_mid = Tensor{R, H};
        detail::layer_norm(sum1, lp.attn_ln_g, lp.attn_ln_b, lc.x_mid, lc.ln1);

        const std::int64_t I = cfg.intermediate;
        lc.ffn_pre = Tensor{R, I};
        matmul_nn(R, I, H, lc.x_mid.ptr(), lp.w1.ptr(), lc.ffn_pre.ptr());
        detail::add_bias(lc.ffn_pre, lp.b1);
        lc.ffn_act = Tensor{R, I};
        for (std::int64_t i = 0; i < R * I; ++i) lc.ffn_act.at(i) = detail::gelu(lc.ffn_pre.at(i));

        Tensor ffn_dense{R, H};
        matmul_nn(R, H, I, lc.ffn_act.ptr(), lp.w2.ptr(), ffn_dense.ptr());
        detail::add_bias(ffn_dense, lp.b2);
        if (training) {
            lc.drop_ffn = detail::draw_dropout_mask(ffn_dense.shape, cfg.dropout, drop_rng);
            for (std::int64_t i = 0; i < R * H; ++i) ffn_dense.at(i) *= lc.drop_ffn.at(i);
        }

        Tensor sum2{R, H};
        for (std::int64_t i = 0; i < R * H; ++i) sum2.at(i) = lc.x_mid.at(i) + ffn_dense.at(i);
        lc.x_out = Tensor{R, H};
        detail::layer_norm(sum2, lp.ffn_ln_g, lp.ffn_ln_b, lc.x_out, lc.ln2);
        current = lc.x_out;
    }

    // LM head: dense + GELU + layer norm, then the tied projection.
    cache.head_pre = Tensor{R, H};
    matmul_nn(R, H, H, current.ptr(), params.head_w.ptr(), cache.head_pre.ptr());
    detail::add_bias(cache.head_pre, params.head_b);
    cache.head_act = Tensor{R, H};
    for (std::int64_t i = 0; i < R * H; ++i) {
        cache.head_act.at(i) = detail::gelu(cache.head_pre.at(i));
    }
    cache.head_out = Tensor{R, H};
    detail::layer_norm(cache.head_act, params.head_ln_g, params.head_ln_b, cache.head_out,
                       cache.head_ln);

    const std::int64_t V = cfg.vocab_size;
    cache.logits = Tensor{B, L, V};
    matmul_nt(R, V, H, cache.head_out.ptr(), params.word_emb.ptr(), cache.logits.ptr());
    for (std::int64_t r = 0; r < R; ++r) {
        double* row = cache.logits.ptr() + r * V;
        for (std::int64_t v = 0; v < V; ++v) row[v] += params.out_bias.at(v);
    }
    return cache.logits;
}

inline Tensor forward(const EncoderParams& params, const MaskedBatch& batch) {
    ForwardCache cache;
    forward(params, batch, cache);
    return std::move(cache.logits);
}

// Mean cross-entropy over labeled positions.
inline double mlm_loss(const Tensor& logits, const IntMatrix& labels) {
    if (logits.shape.size() != 3) throw ShapeMismatch("logits must be B x L x V");
    const std::int64_t B = logits.shape[0];
    const std::int64_t L = logits.shape[1];
    const std::int64_t V = logits.shape[2];
    if (labels.rows != B || labels.cols != L) {
        throw ShapeMismatch("labels shape does not match logits");
    }
    double total = 0.0;
    std::int64_t n = 0;
    for (std::int64_t r = 0; r < B * L; ++r) {
        const auto label = labels.data[std::size_t(r)];
        if (label == kIgnoreLabel) continue;
        if (label < 0 || label >= V) throw ShapeMismatch("label id outside vocabulary");
        const double* row = logits.ptr() + r * V;
        double maxv = row[0];
        for (std::int64_t v = 1; v < V; ++v) maxv = std::max(maxv, row[v]);
        double denom = 0.0;
        for (std::int64_t v = 0; v < V; ++v) denom += std::exp(row[v] - maxv);
        total += std::log(denom) + maxv - row[label];
        ++n;
    }
    if (n == 0) throw NoMaskedPositions();
    return total / double(n);
}

// Loss plus gradients for every parameter tensor, accumulated into `grads`.
inline double mlm_loss_and_backward(const EncoderParams& params, const ForwardCache& cache,
                                    const MaskedBatch& batch, EncoderParams& grads) {
    const EncoderConfig& cfg = params.config;
    const std::int64_t B = cache.B, L = cache.L, R = cache.R;
    const std::int64_t H = cfg.hidden;
    const std::int64_t V = cfg.vocab_size;
    const std::int64_t heads = cfg.num_heads;
    const std::int64_t d = cfg.head_dim();
    const bool training = cache.emb_drop_mask.numel() > 0;

    std::int64_t n_labeled = 0;
    for (const auto label : batch.labels.data) n_labeled += label != kIgnoreLabel;
    if (n_labeled == 0) throw NoMaskedPositions();

    // Softmax cross-entropy gradient at labeled positions.
    double loss = 0.0;
    Tensor dlogits{R, V};
    const double inv_n = 1.0 / double(n_labeled);
    for (std::int64_t r = 0; r < R; ++r) {
        const auto label = batch.labels.data[std::size_t(r)];
        if (label == kIgnoreLabel) continue;
        const double* row = cache.logits.ptr() + r * V;
        double maxv = row[0];
        for (std::int64_t v = 1; v < V; ++v) maxv = std::max(maxv, row[v]);
        double denom = 0.0;
        for (std::int64_t v = 0; v < V; ++v) denom += std::exp(row[v] - maxv);
        loss += std::log(denom) + maxv - row[label];
        double* drow = dlogits.ptr() + r * V;
        for (std::int64_t v = 0; v < V; ++v) {
            drow[v] = std::exp(row[v] - maxv) / denom * inv_n;
        }
        drow[label] -= inv_n;
    }
    loss *= inv_n;

    // Tied projection: gradient flows to head_out and the embedding table.
    Tensor d_head_out{R, H};
    matmul_nn(R, H, V, dlogits.ptr(), params.word_emb.ptr(), d_head_out.ptr());
    matmul_tn(V, H, R, dlogits.ptr(), cache.head_out.ptr(), grads.word_emb.ptr(), true);
    for (std::int64_t r = 0; r < R; ++r) {
        const double* drow = dlogits.ptr() + r * V;
        for (std::int64_t v = 0; v < V; ++v) grads.out_bias.at(v) += drow[v];
    }

    Tensor d_head_act{R, H};
    detail::layer_norm_backward(d_head_out, params.head_ln_g, cache.head_ln, d_head_act,
                                grads.head_ln_g, grads.head_ln_b);
    Tensor d_head_pre{R, H};
    for (std::int64_t i = 0; i < R * H; ++i) {
        d_head_pre.at(i) = d_head_act.at(i) * detail::gelu_grad(cache.head_pre.at(i));
    }
    const Tensor& head_in = cache.layers.back().x_out;
    Tensor d_current{R, H};
    matmul_nt(R, H, H, d_head_pre.ptr(), params.head_w.ptr(), d_current.ptr());
    matmul_tn(H, H, R, head_in.ptr(), d_head_pre.ptr(), grads.head_w.ptr(), true);
    detail::bias_grad(d_head_pre, grads.head_b);

    for (std::int64_t li = cfg.num_layers - 1; li >= 0; --li) {
        const auto& lc = cache.layers[std::size_t(li)];
        const auto& lp = params.layers[std::size_t(li)];
        auto& lg = grads.layers[std::size_t(li)];

        Tensor d_sum2{R, H};
        detail::layer_norm_backward(d_current, lp.ffn_ln_g, lc.ln2, d_sum2, lg.ffn_ln_g,
                                    lg.ffn_ln_b);
        Tensor d_ffn_dense = d_sum2;
        if (training) {
            for (std::int64_t i = 0; i < R * H; ++i) d_ffn_dense.at(i) *= lc.drop_ffn.at(i);
        }
        const std::int64_t I = cfg.intermediate;
        Tensor d_ffn_act{R, I};
        matmul_nt(R, I, H, d_ffn_dense.ptr(), lp.w2.ptr(), d_ffn_act.ptr());
        matmul_tn(I, H, R, lc.ffn_act.ptr(), d_ffn_dense.ptr(), lg.w2.ptr(), true);
        detail::bias_grad(d_ffn_dense, lg.b2);
        Tensor d_ffn_pre{R, I};
        for (std::int64_t i = 0; i < R * I; ++i) {
            d_ffn_pre.at(i) = d_ffn_act.at(i) * detail::gelu_grad(lc.ffn_pre.at(i));
        }
        Tensor d_x_mid = d_sum2; // residual path
        matmul_nt(R, H, I, d_ffn_pre.ptr(), lp.w1.ptr(), d_x_mid.ptr(), true);
        matmul_tn(H, I, R, lc.x_mid.ptr(), d_ffn_pre.ptr(), lg.w1.ptr(), true);
        detail::bias_grad(d_ffn_pre, lg.b1);

        Tensor d_sum1{R, H};
        detail::layer_norm_backward(d_x_mid, lp.attn_ln_g, lc.ln1, d_sum1, lg.attn_ln_g,
                                    lg.attn_ln_b);
        Tensor d_attn_dense = d_sum1;
        if (training) {
            for (std::int64_t i = 0; i < R * H; ++i) d_attn_dense.at(i) *= lc.drop_attn.at(i);
        }
        Tensor d_ctx{R, H};
        matmul_nt(R, H, H, d_attn_dense.ptr(), lp.wo.ptr(), d_ctx.ptr());
        matmul_tn(H, H, R, lc.ctx.ptr(), d_attn_dense.ptr(), lg.wo.ptr(), true);
        detail::bias_grad(d_attn_dense, lg.bo);

        Tensor d_q{R, H}, d_k{R, H}, d_v{R, H};
        const double scale = 1.0 / std::sqrt(double(d));
        // As in the forward pass, (b, h) pairs own disjoint slices of
        // d_q/d_k/d_v, so no synchronization is needed.
#pragma omp parallel for schedule(static) collapse(2)
        for (std::int64_t b = 0; b < B; ++b) {
            for (std::int64_t h = 0; h < heads; ++h) {
                const double* probs = lc.probs.ptr() + (b * heads + h) * L * L;
                const double* pmask =
                    training ? lc.drop_probs.ptr() + (b * heads + h) * L * L : nullptr;
                std::vector<double> dscores(std::size_t(L * L), 0.0);
                for (std::int64_t i = 0; i < L; ++i) {
                    const double* dci = d_ctx.ptr() + (b * L + i) * H + h * d;
                    // d(dropped probs)[i][j] = d_ctx[i] . v[j]; undo dropout on
                    // the way back; d_v[j] uses the dropped probabilities.
                    std::vector<double> dprobs(std::size_t(L), 0.0);
                    for (std::int64_t j = 0; j < L; ++j) {
                        if (batch.attention_mask.at(b, j) == 0) continue;
                        const double pd = pmask ? probs[i * L + j] * pmask[i * L + j]
                                                : probs[i * L + j];
                        const double* vj = lc.v.ptr() + (b * L + j) * H + h * d;
                        double s = 0.0;
                        for (std::int64_t t = 0; t < d; ++t) s += dci[t] * vj[t];
                        dprobs[std::size_t(j)] = pmask ? s * pmask[i * L + j] : s;
                        if (pd != 0.0) {
                            double* dvj = d_v.ptr() + (b * L + j) * H + h * d;
                            for (std::int64_t t = 0; t < d; ++t) dvj[t] += pd * dci[t];
                        }
                    }
                    // Softmax jacobian against the pre-dropout probabilities.
                    double dot = 0.0;
                    for (std::int64_t j = 0; j < L; ++j) {
                        dot += dprobs[std::size_t(j)] * probs[i * L + j];
                    }
                    double* dsrow = dscores.data() + i * L;
                    for (std::int64_t j = 0; j < L; ++j) {
                        if (batch.attention_mask.at(b, j) == 0) continue;
                        dsrow[j] = probs[i * L + j] * (dprobs[std::size_t(j)] - dot);
                    }
                }
                for (std::int64_t i = 0; i < L; ++i) {
                    double* dqi = d_q.ptr() + (b * L + i) * H + h * d;
                    const double* qi = lc.q.ptr() + (b * L + i) * H + h * d;
                    const double* dsrow = dscores.data() + i * L;
                    for (std::int64_t j = 0; j < L; ++j) {
                        const double s = dsrow[j] * scale;
                        if (s == 0.0) continue;
                        const double* kj = lc.k.ptr() + (b * L + j) * H + h * d;
                        double* dkj = d_k.ptr() + (b * L + j) * H + h * d;
                        for (std::int64_t t = 0; t < d; ++t) {
                            dqi[t] += s * kj[t];
                            dkj[t] += s * qi[t];
                        }
                    }
                }
            }
        }

        Tensor d_x_in = d_sum1; // residual path
        matmul_nt(R, H, H, d_q.ptr(), lp.wq.ptr(), d_x_in.ptr(), true);
        matmul_tn(H, H, R, lc.x_in.ptr(), d_q.ptr(), lg.wq.ptr(), true);
        detail::bias_grad(d_q, lg.bq);
        matmul_nt(R, H, H, d_k.ptr(), lp.wk.ptr(), d_x_in.ptr(), true);
        matmul_tn(H, H, R, lc.x_in.ptr(), d_k.ptr(), lg.wk.ptr(), true);
        detail::bias_grad(d_k, lg.bk);
        matmul_nt(R, H, H, d_v.ptr(), lp.wv.ptr(), d_x_in.ptr(), true);
        matmul_tn(H, H, R, lc.x_in.ptr(), d_v.ptr(), lg.wv.ptr(), true);
        detail::bias_grad(d_v, lg.bv);

        d_current = std::move(d_x_in);
    }

    // Embedding backward.
    if (training) {
        for (std::int64_t i = 0; i < R * H; ++i) d_current.at(i) *= cache.emb_drop_mask.at(i);
    }
    Tensor d_emb_sum{R, H};
    detail::layer_norm_backward(d_current, params.emb_ln_g, cache.emb_ln, d_emb_sum,
                                grads.emb_ln_g, grads.emb_ln_b);
    for (std::int64_t b = 0; b < B; ++b) {
        for (std::int64_t l = 0; l < L; ++l) {
            const std::int64_t r = b * L + l;
            const double* row = d_emb_sum.ptr() + r * H;
            const auto id = batch.input_ids.at(b, l);
            double* dwe = grads.word_emb.ptr() + std::int64_t(id) * H;
            double* dpe = grads.pos_emb.ptr() + l * H;
            double* dte = grads.type_emb.ptr();
            for (std::int64_t j = 0; j < H; ++j) {
                dwe[j] += row[j];
                dpe[j] += row[j];
                dte[j] += row[j];
            }
        }
    }
    return loss;
}

} // namespace jmlm
