#pragma once

#include <vector>

#include "seal/eval.hpp"
#include "seal/model.hpp"
#include "seal/parallel.hpp"
#include "seal/scales.hpp"

namespace seal {

// Pruning a head is exactly a zero scale: heads are independent after their
// softmax, so zeroing the output is the whole story.
template <typename T>
ScaleSet<T> prune_head(const ScaleSet<T>& scales, int layer, int head) {
    if (layer < 0 || layer >= scales.n_layers || head < 0 || head >= scales.n_heads)
        throw ShapeError("prune_head indices out of range");
    ScaleSet<T> out = scales;
    if (out.mode == ScaleMode::kHead) {
        out.head_ref(layer, head) = T(0);
    } else {
        for (int c = 0; c < out.d_head; ++c) out.channel_ref(layer, head, c) = T(0);
    }
    return out;
}

template <typename T>
ScaleSet<T> prune_channel(const ScaleSet<T>& scales, int layer, int head, int channel) {
    if (layer < 0 || layer >= scales.n_layers || head < 0 || head >= scales.n_heads ||
        channel < 0 || channel >= scales.d_head)
        throw ShapeError("prune_channel indices out of range");
    ScaleSet<T> out = scales.mode == ScaleMode::kChannel ? scales : scales.to_channel();
    out.channel_ref(layer, head, channel) = T(0);
    return out;
}

struct SweepEntry {
    int layer = 0;
    int head = 0;
    double score_mid = 0.0;
    double score_long = 0.0;
    double delta_mid = 0.0;
    double delta_long = 0.0;
};

struct SweepResult {
    int n_layers = 0;
    int n_heads = 0;
    double baseline_mid = 0.0;
    double baseline_long = 0.0;
    std::vector<SweepEntry> entries;  // layer-major, length L*H
};

// One ablation per head against a shared baseline. Entries land in a
// preallocated grid so the execution order (and thread count) is invisible.
template <typename T>
SweepResult head_sweep(const Weights<T>& w, const ScaleSet<T>& scales, const PositionScheme& scheme,
                       const Tokenizer& tok, const std::vector<Sample>& eval_mid,
                       const std::vector<Sample>& eval_long, int threads = 1) {
    if (eval_mid.empty() || eval_long.empty()) throw GenerationError("head_sweep needs nonempty eval sets");
    SweepResult r;
    r.n_layers = w.cfg.n_layers;
    r.n_heads = w.cfg.n_heads;
    r.baseline_mid = evaluate(w, scales, scheme, tok, eval_mid, threads).mean;
    r.baseline_long = evaluate(w, scales, scheme, tok, eval_long, threads).mean;
    r.entries.assign(static_cast<std::size_t>(r.n_layers * r.n_heads), SweepEntry{});
    parallel_for(r.entries.size(), threads, [&](std::size_t i) {
        const int l = static_cast<int>(i) / r.n_heads;
        const int h = static_cast<int>(i) % r.n_heads;
        const ScaleSet<T> pruned = prune_head(scales, l, h);
        SweepEntry e;
        e.layer = l;
        e.head = h;
        e.score_mid = evaluate(w, pruned, scheme, tok, eval_mid, 1).mean;
        e.score_long = evaluate(w, pruned, scheme, tok, eval_long, 1).mean;
        e.delta_mid = e.score_mid - r.baseline_mid;
        e.delta_long = e.score_long - r.baseline_long;
        r.entries[i] = e;
    });
    return r;
}

struct ChannelSweepResult {
    int layer = 0;
    int head = 0;
    double baseline_long = 0.0;
    std::vector<double> score_long;  // length d_head
    std::vector<double> delta_long;
};

template <typename T>
ChannelSweepResult channel_sweep(const Weights<T>& w, const ScaleSet<T>& scales,
                                 const PositionScheme& scheme, const Tokenizer& tok, int layer,
                                 int head, const std::vector<Sample>& eval_long, int threads = 1) {
    if (layer < 0 || layer >= w.cfg.n_layers || head < 0 || head >= w.cfg.n_heads)
        throw ShapeError("channel_sweep indices out of range");
    if (eval_long.empty()) throw GenerationError("channel_sweep needs a nonempty eval set");
    ChannelSweepResult r;
    r.layer = layer;
    r.head = head;
    r.baseline_long = evaluate(w, scales, scheme, tok, eval_long, threads).mean;
    r.score_long.assign(static_cast<std::size_t>(w.cfg.d_head), 0.0);
    r.delta_long.assign(static_cast<std::size_t>(w.cfg.d_head), 0.0);
    parallel_for(r.score_long.size(), threads, [&](std::size_t c) {
        const ScaleSet<T> pruned = prune_channel(scales, layer, head, static_cast<int>(c));
        r.score_long[c] = evaluate(w, pruned, scheme, tok, eval_long, 1).mean;
        r.delta_long[c] = r.score_long[c] - r.baseline_long;
    });
    return r;
}

// Manual rescale from the sweep quadrants: heads whose ablation helped at
// both lengths are damped, heads whose ablation hurt at both are boosted,
// anything on an axis stays at 1.
template <typename T>
ScaleSet<T> quadrant_scale(const SweepResult& sweep, const ModelConfig& cfg, T q1_factor = T(0.9),
                           T q3_factor = T(1.1)) {
    if (q1_factor <= T(0) || q3_factor <= T(0)) throw ShapeError("quadrant factors must be positive");
    if (sweep.n_layers != cfg.n_layers || sweep.n_heads != cfg.n_heads)
        throw ShapeError("sweep dimensions do not match the model config");
    ScaleSet<T> s = ScaleSet<T>::ones(cfg, ScaleMode::kHead);
    for (const SweepEntry& e : sweep.entries) {
        if (e.delta_mid > 0 && e.delta_long > 0)
            s.head_ref(e.layer, e.head) = q1_factor;
        else if (e.delta_mid < 0 && e.delta_long < 0)
            s.head_ref(e.layer, e.head) = q3_factor;
    }
    return s;
}

}  // namespace seal
