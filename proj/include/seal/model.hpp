#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "seal/config.hpp"
#include "seal/errors.hpp"
#include "seal/extend.hpp"
#include "seal/rng.hpp"
#include "seal/scales.hpp"
#include "seal/tensor.hpp"

namespace seal {

// All projection matrices are stored [in x out] and applied as y = x * W,
// with activations as row vectors. Head h of a layer owns columns
// [h*d_head, (h+1)*d_head) of wq's output and rows of the same range in wo.
template <typename T>
struct Weights {
    struct Layer {
        Tensor<T> ln1;  // [d_model]
        Tensor<T> wq;   // [d_model, H*d_head]
        Tensor<T> wk;   // [d_model, KVH*d_head]
        Tensor<T> wv;   // [d_model, KVH*d_head]
        Tensor<T> wo;   // [H*d_head, d_model]
        Tensor<T> ln2;  // [d_model]
        Tensor<T> w1;   // [d_model, d_ff]
        Tensor<T> w2;   // [d_ff, d_model]
    };

    ModelConfig cfg;
    Tensor<T> embed;       // [V, d_model]
    std::vector<Layer> layers;
    Tensor<T> final_norm;  // [d_model]
    Tensor<T> unembed;     // [V, d_model]; logits = x_normed * unembed^T

    // Fixed iteration order over every parameter tensor; used by the
    // optimizer, checkpointing, and gradient plumbing so they all agree.
    template <typename Fn>
    void for_each_tensor(Fn&& fn) {
        fn("embed", embed);
        for (std::size_t l = 0; l < layers.size(); ++l) {
            const std::string p = "layers." + std::to_string(l) + ".";
            fn(p + "ln1", layers[l].ln1);
            fn(p + "wq", layers[l].wq);
            fn(p + "wk", layers[l].wk);
            fn(p + "wv", layers[l].wv);
            fn(p + "wo", layers[l].wo);
            fn(p + "ln2", layers[l].ln2);
            fn(p + "w1", layers[l].w1);
            fn(p + "w2", layers[l].w2);
        }
        fn("final_norm", final_norm);
        fn("unembed", unembed);
    }
    template <typename Fn>
    void for_each_tensor(Fn&& fn) const {
        const_cast<Weights*>(this)->for_each_tensor(
            [&fn](const std::string& name, Tensor<T>& t) {
                fn(name, static_cast<const Tensor<T>&>(t));
            });
    }
};

template <typename T>
Weights<T> zero_weights(const ModelConfig& cfg) {
    cfg.validate();
    Weights<T> w;
    w.cfg = cfg;
    const int d = cfg.d_model, hq = cfg.n_heads * cfg.d_head,
              hk = cfg.n_kv_heads * cfg.d_head;
    w.embed = Tensor<T>({cfg.vocab_size, d});
    w.layers.resize(static_cast<std::size_t>(cfg.n_layers));
    for (auto& l : w.layers) {
        l.ln1 = Tensor<T>({d});
        l.wq = Tensor<T>({d, hq});
        l.wk = Tensor<T>({d, hk});
        l.wv = Tensor<T>({d, hk});
        l.wo = Tensor<T>({hq, d});
        l.ln2 = Tensor<T>({d});
        l.w1 = Tensor<T>({d, cfg.d_ff});
        l.w2 = Tensor<T>({cfg.d_ff, d});
    }
    w.final_norm = Tensor<T>({d});
    w.unembed = Tensor<T>({cfg.vocab_size, d});
    return w;
}

// Gaussian init, residual-writing matrices damped by 1/sqrt(2*L), norm
// weights at 1. Draw order is the for_each_tensor order, so a seed pins
// every parameter bit.
template <typename T>
Weights<T> random_weights(const ModelConfig& cfg, std::uint64_t seed) {
    Weights<T> w = zero_weights<T>(cfg);
    Rng rng(seed);
    const double base_std = 0.02;
    const double resid_std = base_std / std::sqrt(2.0 * cfg.n_layers);
    w.for_each_tensor([&](const std::string& name, Tensor<T>& t) {
        const bool is_norm = name.find("ln") != std::string::npos || name == "final_norm";
        if (is_norm) {
            t.fill(T(1));
            return;
        }
        const bool writes_residual =
            name.find(".wo") != std::string::npos || name.find(".w2") != std::string::npos;
        const double sd = writes_residual ? resid_std : base_std;
        for (auto& v : t.data) v = T(normal(rng) * sd);
    });
    return w;
}

// Elementwise precision change, e.g. to rerun a pipeline check in f64.
template <typename To, typename From>
Weights<To> weights_cast(const Weights<From>& w) {
    Weights<To> out = zero_weights<To>(w.cfg);
    std::vector<const Tensor<From>*> src;
    w.for_each_tensor([&src](const std::string&, const Tensor<From>& t) { src.push_back(&t); });
    std::size_t n = 0;
    out.for_each_tensor([&](const std::string&, Tensor<To>& t) {
        const auto& s = src[n++]->data;
        for (std::size_t i = 0; i < s.size(); ++i) t.data[i] = static_cast<To>(s[i]);
    });
    return out;
}

// Per-channel rotary frequencies for pair c = (2c, 2c+1): theta^(-2c/d).
inline std::vector<double> rope_inv_freq(int d_head, double theta) {
    std::vector<double> f(static_cast<std::size_t>(d_head / 2));
    for (int c = 0; c < d_head / 2; ++c)
        f[static_cast<std::size_t>(c)] = std::pow(theta, -2.0 * c / d_head);
    return f;
}

// Rotates rows of q and k in place by their absolute position angles.
// Channel pairs are adjacent: (0,1), (2,3), ...
template <typename T>
void apply_rope(Tensor<T>& q, Tensor<T>& k, const std::vector<int>& positions,
                int d_head, double theta) {
    if (d_head % 2 != 0) throw ShapeError("apply_rope requires even d_head");
    if (q.shape.size() != 2 || q.shape[1] != d_head || k.shape.size() != 2 ||
        k.shape[1] != d_head)
        throw ShapeError("apply_rope expects [n x d_head] tensors");
    if (q.shape[0] != static_cast<int>(positions.size()) || q.shape[0] != k.shape[0])
        throw ShapeError("apply_rope row/position count mismatch");
    const auto inv_freq = rope_inv_freq(d_head, theta);
    for (int i = 0; i < q.shape[0]; ++i) {
        T* qr = q.row(i);
        T* kr = k.row(i);
        for (int c = 0; c < d_head / 2; ++c) {
            const double ang = inv_freq[static_cast<std::size_t>(c)] * positions[static_cast<std::size_t>(i)];
            const T co = T(std::cos(ang)), si = T(std::sin(ang));
            const T q0 = qr[2 * c], q1 = qr[2 * c + 1];
            qr[2 * c] = q0 * co - q1 * si;
            qr[2 * c + 1] = q0 * si + q1 * co;
            const T k0 = kr[2 * c], k1 = kr[2 * c + 1];
            kr[2 * c] = k0 * co - k1 * si;
            kr[2 * c + 1] = k0 * si + k1 * co;
        }
    }
}

// Attention works in relative angles: score(t, j) uses the rotation for
// distance t-j (mapped through the position scheme), applied between raw
// q and k. This is exactly the standard rotated-absolute-position dot
// product (rotations are orthogonal), keeps cached k vectors valid for any
// later query, and makes Self-Extend's grouped relative positions exact
// rather than approximated through absolute indices.
template <typename T>
struct RopeTable {
    int half = 0;
    std::vector<T> cos_t, sin_t;  // [n, half], indexed by relative distance

    const T* cos_row(int r) const { return cos_t.data() + static_cast<std::size_t>(r) * half; }
    const T* sin_row(int r) const { return sin_t.data() + static_cast<std::size_t>(r) * half; }
};

template <typename T>
RopeTable<T> make_rope_table(const ModelConfig& cfg, const PositionScheme& scheme, int n) {
    RopeTable<T> tab;
    tab.half = cfg.d_head / 2;
    tab.cos_t.resize(static_cast<std::size_t>(n) * tab.half);
    tab.sin_t.resize(static_cast<std::size_t>(n) * tab.half);
    const auto inv_freq = rope_inv_freq(cfg.d_head, scheme_theta(scheme, cfg.rope_theta, cfg.d_head));
    for (int r = 0; r < n; ++r) {
        const int eff = scheme_relative(scheme, r);
        for (int c = 0; c < tab.half; ++c) {
            const double ang = inv_freq[static_cast<std::size_t>(c)] * eff;
            tab.cos_t[static_cast<std::size_t>(r) * tab.half + c] = T(std::cos(ang));
            tab.sin_t[static_cast<std::size_t>(r) * tab.half + c] = T(std::sin(ang));
        }
    }
    return tab;
}

// Everything the backward pass (and the attribution code) needs from a
// forward evaluation.
template <typename T>
struct Trace {
    struct LayerTrace {
        Tensor<T> x_in;      // [T, d_model] residual entering the layer
        Tensor<T> xn1;       // [T, d_model]
        Tensor<T> q;         // [T, H*d_head] (unrotated)
        Tensor<T> k;         // [T, KVH*d_head] (unrotated)
        Tensor<T> v;         // [T, KVH*d_head]
        Tensor<T> probs;     // [H, T, T] causal attention weights
        Tensor<T> head_raw;  // [T, H*d_head] head outputs before scaling
        Tensor<T> att_res;   // [T, d_model] attention residual update
        Tensor<T> x_mid;     // [T, d_model] after attention add
        Tensor<T> xn2;       // [T, d_model]
        Tensor<T> h1;        // [T, d_ff] pre-activation
        Tensor<T> act;       // [T, d_ff] silu(h1)
        Tensor<T> mlp_res;   // [T, d_model]
    };
    std::vector<int> tokens;
    std::vector<LayerTrace> layers;
    Tensor<T> x_final;   // [T, d_model] pre-norm residual after all layers
    Tensor<T> xf_norm;   // [T, d_model]
    Tensor<T> logits;    // [T, V]
};

namespace detail {

template <typename T>
void validate_tokens(const std::vector<int>& tokens, const ModelConfig& cfg) {
    if (tokens.empty()) throw LengthError("forward requires at least one token");
    if (static_cast<int>(tokens.size()) > cfg.hard_cap())
        throw LengthError("sequence length " + std::to_string(tokens.size()) +
                          " exceeds hard cap " + std::to_string(cfg.hard_cap()));
    for (int id : tokens)
        if (id < 0 || id >= cfg.vocab_size)
            throw TokenError("token id " + std::to_string(id) + " outside vocabulary");
}

// Shared forward. If tr is non-null every intermediate is retained; the
// arithmetic and its order are identical either way.
template <typename T>
Tensor<T> forward_impl(const std::vector<int>& tokens, const Weights<T>& w,
                       const ScaleSet<T>& scales, const PositionScheme& scheme,
                       Trace<T>* tr) {
    const ModelConfig& cfg = w.cfg;
    validate_tokens<T>(tokens, cfg);
    scales.check_model(cfg);
    const int tt = static_cast<int>(tokens.size());
    const int d = cfg.d_model, dh = cfg.d_head, hh = cfg.n_heads, kvh = cfg.n_kv_heads;
    const int gw = cfg.group_width(), half = dh / 2;
    const T inv_sqrt = T(1) / T(std::sqrt(static_cast<double>(dh)));

    const RopeTable<T> rope = make_rope_table<T>(cfg, scheme, tt);

    if (tr) {
        tr->tokens = tokens;
        tr->layers.clear();
        tr->layers.resize(static_cast<std::size_t>(cfg.n_layers));
    }

    Tensor<T> x({tt, d});
    for (int t = 0; t < tt; ++t) {
        const T* er = w.embed.row(tokens[static_cast<std::size_t>(t)]);
        T* xr = x.row(t);
        for (int i = 0; i < d; ++i) xr[i] = er[i];
    }

    std::vector<T> score(static_cast<std::size_t>(tt));
    Tensor<T> xn({tt, d});
    Tensor<T> att_out({tt, hh * dh});
    Tensor<T> att_res({tt, d});
    for (int l = 0; l < cfg.n_layers; ++l) {
        const auto& lw = w.layers[static_cast<std::size_t>(l)];
        if (tr) tr->layers[static_cast<std::size_t>(l)].x_in = x;

        for (int t = 0; t < tt; ++t)
            rms_norm_into(x.row(t), lw.ln1.data.data(), d, T(1e-5), xn.row(t));
        Tensor<T> q = matmul(xn, lw.wq);
        Tensor<T> k = matmul(xn, lw.wk);
        Tensor<T> v = matmul(xn, lw.wv);

        if (tr) {
            auto& lt = tr->layers[static_cast<std::size_t>(l)];
            lt.xn1 = xn;
            lt.q = q;
            lt.k = k;
            lt.v = v;
            lt.probs = Tensor<T>({hh, tt, tt});
        }

        att_out.fill(T(0));
        for (int h = 0; h < hh; ++h) {
            const int g = h / gw;
            for (int t = 0; t < tt; ++t) {
                const T* qr = q.row(t) + h * dh;
                for (int j = 0; j <= t; ++j) {
                    const T* kr = k.row(j) + g * dh;
                    const T* co = rope.cos_row(t - j);
                    const T* si = rope.sin_row(t - j);
                    T acc = 0;
                    for (int c = 0; c < half; ++c) {
                        const T q0 = qr[2 * c], q1 = qr[2 * c + 1];
                        const T k0 = kr[2 * c], k1 = kr[2 * c + 1];
                        acc += co[c] * (q0 * k0 + q1 * k1) + si[c] * (q0 * k1 - q1 * k0);
                    }
                    score[static_cast<std::size_t>(j)] = acc * inv_sqrt;
                }
                softmax_inplace(score.data(), t + 1);
                if (tr) {
                    auto& probs = tr->layers[static_cast<std::size_t>(l)].probs;
                    for (int j = 0; j <= t; ++j) probs.at(h, t, j) = score[static_cast<std::size_t>(j)];
                }
                T* out = att_out.row(t) + h * dh;
                for (int j = 0; j <= t; ++j) {
                    const T p = score[static_cast<std::size_t>(j)];
                    const T* vr = v.row(j) + g * dh;
                    for (int c = 0; c < dh; ++c) out[c] += p * vr[c];
                }
            }
        }
        if (tr) tr->layers[static_cast<std::size_t>(l)].head_raw = att_out;

        // Scale each head's output, then fold through the output projection
        // one head block at a time. Each head's contribution accumulates in
        // its own buffer before landing on the residual, so the sum of
        // per-head contributions reproduces the residual update bit-for-bit.
        att_res.fill(T(0));
        std::vector<T> headc(static_cast<std::size_t>(d));
        for (int t = 0; t < tt; ++t) {
            T* rr = att_res.row(t);
            for (int h = 0; h < hh; ++h) {
                std::fill(headc.begin(), headc.end(), T(0));
                const T* out = att_out.row(t) + h * dh;
                for (int c = 0; c < dh; ++c) {
                    const T y = out[c] * scales.value(l, h, c);
                    const T* worow = lw.wo.row(h * dh + c);
                    for (int i = 0; i < d; ++i) headc[static_cast<std::size_t>(i)] += y * worow[i];
                }
                for (int i = 0; i < d; ++i) rr[i] += headc[static_cast<std::size_t>(i)];
            }
        }
        for (int t = 0; t < tt; ++t) {
            T* xr = x.row(t);
            const T* rr = att_res.row(t);
            for (int i = 0; i < d; ++i) xr[i] += rr[i];
        }
        if (tr) {
            auto& lt = tr->layers[static_cast<std::size_t>(l)];
            lt.att_res = att_res;
            lt.x_mid = x;
        }

        for (int t = 0; t < tt; ++t)
            rms_norm_into(x.row(t), lw.ln2.data.data(), d, T(1e-5), xn.row(t));
        Tensor<T> h1 = matmul(xn, lw.w1);
        Tensor<T> act = h1;
        for (auto& a : act.data) a = silu(a);
        Tensor<T> mlp_res = matmul(act, lw.w2);
        for (int t = 0; t < tt; ++t) {
            T* xr = x.row(t);
            const T* mr = mlp_res.row(t);
            for (int i = 0; i < d; ++i) xr[i] += mr[i];
        }
        if (tr) {
            auto& lt = tr->layers[static_cast<std::size_t>(l)];
            lt.xn2 = xn;
            lt.h1 = std::move(h1);
            lt.act = std::move(act);
            lt.mlp_res = std::move(mlp_res);
        }
    }

    if (tr) tr->x_final = x;
    Tensor<T> xf({tt, d});
    for (int t = 0; t < tt; ++t)
        rms_norm_into(x.row(t), w.final_norm.data.data(), d, T(1e-5), xf.row(t));
    Tensor<T> logits = matmul_nt(xf, w.unembed);
    if (tr) {
        tr->xf_norm = std::move(xf);
        tr->logits = logits;
    }
    return logits;
}

} // namespace detail

template <typename T>
Tensor<T> forward(const std::vector<int>& tokens, const Weights<T>& w,
                  const ScaleSet<T>& scales, const PositionScheme& scheme) {
    return detail::forward_impl(tokens, w, scales, scheme, static_cast<Trace<T>*>(nullptr));
}

template <typename T>
Trace<T> forward_trace(const std::vector<int>& tokens, const Weights<T>& w,
                       const ScaleSet<T>& scales, const PositionScheme& scheme) {
    Trace<T> tr;
    detail::forward_impl(tokens, w, scales, scheme, &tr);
    return tr;
}

// Residual-stream contribution of every (layer, head) at position t: the
// output projection applied to that head's scaled output. Summing heads of
// one layer reproduces the layer's attention residual update bit-for-bit.
template <typename T>
Tensor<T> head_contributions(const std::vector<int>& tokens, const Weights<T>& w,
                             const ScaleSet<T>& scales, const PositionScheme& scheme,
                             int t) {
    if (t < 0 || t >= static_cast<int>(tokens.size()))
        throw LengthError("head_contributions position out of range");
    Trace<T> tr = forward_trace(tokens, w, scales, scheme);
    return head_contributions_at(tr, w, scales, t);
}

// Same, reusing an existing trace.
template <typename T>
Tensor<T> head_contributions_at(const Trace<T>& tr, const Weights<T>& w,
                                const ScaleSet<T>& scales, int t) {
    const ModelConfig& cfg = w.cfg;
    const int d = cfg.d_model, dh = cfg.d_head;
    Tensor<T> contrib({cfg.n_layers, cfg.n_heads, d});
    for (int l = 0; l < cfg.n_layers; ++l) {
        const auto& lt = tr.layers[static_cast<std::size_t>(l)];
        const auto& wo = w.layers[static_cast<std::size_t>(l)].wo;
        for (int h = 0; h < cfg.n_heads; ++h) {
            const T* raw = lt.head_raw.row(t) + h * dh;
            T* out = &contrib.at(l, h, 0);
            for (int c = 0; c < dh; ++c) {
                const T y = raw[c] * scales.value(l, h, c);
                const T* worow = wo.row(h * dh + c);
                for (int i = 0; i < d; ++i) out[i] += y * worow[i];
            }
        }
    }
    return contrib;
}

// Incremental decoding state: unrotated k/v caches per layer. Because
// attention uses relative rotations, cached keys need no re-rotation as the
// sequence grows, and each step reproduces the full forward bit-for-bit.
template <typename T>
struct DecodeState {
    const Weights<T>* w = nullptr;
    const ScaleSet<T>* scales = nullptr;
    PositionScheme scheme;
    RopeTable<T> rope;
    int len = 0;
    int cap = 0;
    std::vector<Tensor<T>> k_cache, v_cache;  // per layer [cap, KVH*d_head]

    DecodeState(const Weights<T>& weights, const ScaleSet<T>& sc,
                const PositionScheme& sch, int capacity)
        : w(&weights), scales(&sc), scheme(sch), cap(capacity) {
        const ModelConfig& cfg = weights.cfg;
        if (capacity < 1 || capacity > cfg.hard_cap())
            throw LengthError("decode capacity outside (0, hard cap]");
        sc.check_model(cfg);
        rope = make_rope_table<T>(cfg, sch, capacity);
        const int hk = cfg.n_kv_heads * cfg.d_head;
        for (int l = 0; l < cfg.n_layers; ++l) {
            k_cache.emplace_back(Tensor<T>({capacity, hk}));
            v_cache.emplace_back(Tensor<T>({capacity, hk}));
        }
    }
};

template <typename T>
std::vector<T> w_row_copy(const Tensor<T>& m, int row) {
    const T* r = m.row(row);
    return std::vector<T>(r, r + m.shape[1]);
}

// Feed one token; returns the logits row for its position.
template <typename T>
std::vector<T> decode_step(DecodeState<T>& st, int token) {
    const ModelConfig& cfg = st.w->cfg;
    if (st.len >= st.cap) throw LengthError("decode capacity exhausted");
    if (token < 0 || token >= cfg.vocab_size) throw TokenError("decode token outside vocabulary");
    const int d = cfg.d_model, dh = cfg.d_head, hh = cfg.n_heads;
    const int gw = cfg.group_width(), half = dh / 2;
    const int hq = hh * dh, hk = cfg.n_kv_heads * dh;
    const T inv_sqrt = T(1) / T(std::sqrt(static_cast<double>(dh)));
    const int t = st.len;

    std::vector<T> x(w_row_copy(st.w->embed, token));
    std::vector<T> xn(static_cast<std::size_t>(d));
    std::vector<T> q(static_cast<std::size_t>(hq));
    std::vector<T> score(static_cast<std::size_t>(t + 1));
    std::vector<T> head_out(static_cast<std::size_t>(dh));
    // Residual updates accumulate in their own buffers and land on x with a
    // single addition, mirroring the batched forward's summation order so
    // incremental decoding is bit-identical to a full recompute.
    std::vector<T> res(static_cast<std::size_t>(d));
    std::vector<T> headc(static_cast<std::size_t>(d));
    for (int l = 0; l < cfg.n_layers; ++l) {
        const auto& lw = st.w->layers[static_cast<std::size_t>(l)];
        rms_norm_into(x.data(), lw.ln1.data.data(), d, T(1e-5), xn.data());

        std::fill(q.begin(), q.end(), T(0));
        T* krow = st.k_cache[static_cast<std::size_t>(l)].row(t);
        T* vrow = st.v_cache[static_cast<std::size_t>(l)].row(t);
        std::fill(krow, krow + hk, T(0));
        std::fill(vrow, vrow + hk, T(0));
        for (int i = 0; i < d; ++i) {
            const T xv = xn[static_cast<std::size_t>(i)];
            const T* wqr = lw.wq.row(i);
            for (int o = 0; o < hq; ++o) q[static_cast<std::size_t>(o)] += xv * wqr[o];
            const T* wkr = lw.wk.row(i);
            const T* wvr = lw.wv.row(i);
            for (int o = 0; o < hk; ++o) {
                krow[o] += xv * wkr[o];
                vrow[o] += xv * wvr[o];
            }
        }

        std::fill(res.begin(), res.end(), T(0));
        for (int h = 0; h < hh; ++h) {
            const int g = h / gw;
            const T* qr = q.data() + h * dh;
            for (int j = 0; j <= t; ++j) {
                const T* kr = st.k_cache[static_cast<std::size_t>(l)].row(j) + g * dh;
                const T* co = st.rope.cos_row(t - j);
                const T* si = st.rope.sin_row(t - j);
                T acc = 0;
                for (int c = 0; c < half; ++c) {
                    const T q0 = qr[2 * c], q1 = qr[2 * c + 1];
                    const T k0 = kr[2 * c], k1 = kr[2 * c + 1];
                    acc += co[c] * (q0 * k0 + q1 * k1) + si[c] * (q0 * k1 - q1 * k0);
                }
                score[static_cast<std::size_t>(j)] = acc * inv_sqrt;
            }
            softmax_inplace(score.data(), t + 1);
            std::fill(head_out.begin(), head_out.end(), T(0));
            for (int j = 0; j <= t; ++j) {
                const T p = score[static_cast<std::size_t>(j)];
                const T* vr = st.v_cache[static_cast<std::size_t>(l)].row(j) + g * dh;
                for (int c = 0; c < dh; ++c) head_out[static_cast<std::size_t>(c)] += p * vr[c];
            }
            std::fill(headc.begin(), headc.end(), T(0));
            for (int c = 0; c < dh; ++c) {
                const T y = head_out[static_cast<std::size_t>(c)] * st.scales->value(l, h, c);
                const T* worow = lw.wo.row(h * dh + c);
                for (int i = 0; i < d; ++i) headc[static_cast<std::size_t>(i)] += y * worow[i];
            }
            for (int i = 0; i < d; ++i) res[static_cast<std::size_t>(i)] += headc[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] += res[static_cast<std::size_t>(i)];

        rms_norm_into(x.data(), lw.ln2.data.data(), d, T(1e-5), xn.data());
        std::vector<T> h1(static_cast<std::size_t>(cfg.d_ff), T(0));
        for (int i = 0; i < d; ++i) {
            const T xv = xn[static_cast<std::size_t>(i)];
            const T* w1r = lw.w1.row(i);
            for (int o = 0; o < cfg.d_ff; ++o) h1[static_cast<std::size_t>(o)] += xv * w1r[o];
        }
        for (auto& a : h1) a = silu(a);
        std::fill(res.begin(), res.end(), T(0));
        for (int i = 0; i < cfg.d_ff; ++i) {
            const T av = h1[static_cast<std::size_t>(i)];
            const T* w2r = lw.w2.row(i);
            for (int o = 0; o < d; ++o) res[static_cast<std::size_t>(o)] += av * w2r[o];
        }
        for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] += res[static_cast<std::size_t>(i)];
    }

    rms_norm_into(x.data(), st.w->final_norm.data.data(), d, T(1e-5), xn.data());
    std::vector<T> logits(static_cast<std::size_t>(cfg.vocab_size));
    for (int vtok = 0; vtok < cfg.vocab_size; ++vtok) {
        const T* ur = st.w->unembed.row(vtok);
        T acc = 0;
        for (int i = 0; i < d; ++i) acc += xn[static_cast<std::size_t>(i)] * ur[i];
        logits[static_cast<std::size_t>(vtok)] = acc;
    }
    st.len += 1;
    return logits;
}

// Argmax with ties broken toward the lowest token id.
template <typename T>
int argmax_lowest(const std::vector<T>& v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i)
        if (v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(best)]) best = i;
    return best;
}

// Greedy autoregressive decoding. Stops after max_new tokens or when eos_id
// is produced (eos_id < 0 disables the stop token). Returns only the newly
// generated ids, including the stop token if hit.
template <typename T>
std::vector<int> greedy_decode(const std::vector<int>& prompt, const Weights<T>& w,
                               const ScaleSet<T>& scales, const PositionScheme& scheme,
                               int max_new, int eos_id) {
    if (max_new < 1) throw LengthError("greedy_decode requires max_new >= 1");
    if (prompt.empty()) throw LengthError("greedy_decode requires a nonempty prompt");
    const int cap = std::min<int>(w.cfg.hard_cap(),
                                  static_cast<int>(prompt.size()) + max_new);
    detail::validate_tokens<T>(prompt, w.cfg);
    DecodeState<T> st(w, scales, scheme, cap);
    std::vector<T> logits;
    for (int id : prompt) logits = decode_step(st, id);
    std::vector<int> out;
    for (int n = 0; n < max_new; ++n) {
        const int next = argmax_lowest(logits);
        out.push_back(next);
        if (next == eos_id || n + 1 >= max_new || st.len >= cap) break;
        logits = decode_step(st, next);
    }
    return out;
}

} // namespace seal
