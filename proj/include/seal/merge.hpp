#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "seal/model.hpp"
#include "seal/scales.hpp"

namespace seal {

enum class MergeTarget { kAuto, kVProj, kOProj };

inline const char* merge_target_name(MergeTarget t) {
    switch (t) {
        case MergeTarget::kAuto: return "auto";
        case MergeTarget::kVProj: return "v_proj";
        case MergeTarget::kOProj: return "o_proj";
    }
    throw MergeTargetError("bad merge target");
}

inline MergeTarget resolve_merge_target(const ModelConfig& cfg, MergeTarget t) {
    if (t != MergeTarget::kAuto) return t;
    return cfg.n_kv_heads == cfg.n_heads ? MergeTarget::kVProj : MergeTarget::kOProj;
}

// Folds scales into the weights so inference runs with all-ones scales.
// v_proj merge multiplies output channels (columns of wv); o_proj merge
// multiplies input channels (rows of wo). Under grouped-query attention the
// v path is shared across the heads of a group, so a v merge is only legal
// when every head in a group carries identical scales.
template <typename T>
Weights<T> merge_scales(const Weights<T>& w, const ScaleSet<T>& scales,
                        MergeTarget target = MergeTarget::kAuto) {
    scales.check_model(w.cfg);
    const MergeTarget t = resolve_merge_target(w.cfg, target);
    const int dh = w.cfg.d_head;
    Weights<T> out = w;

    if (t == MergeTarget::kOProj) {
        for (int l = 0; l < w.cfg.n_layers; ++l) {
            auto& wo = out.layers[static_cast<std::size_t>(l)].wo;
            for (int h = 0; h < w.cfg.n_heads; ++h)
                for (int c = 0; c < dh; ++c) {
                    const T s = scales.value(l, h, c);
                    T* row = wo.row(h * dh + c);
                    for (int i = 0; i < w.cfg.d_model; ++i) row[i] *= s;
                }
        }
        return out;
    }

    const int gw = w.cfg.group_width();
    for (int l = 0; l < w.cfg.n_layers; ++l) {
        for (int g = 0; g < w.cfg.n_kv_heads; ++g)
            for (int h = g * gw + 1; h < (g + 1) * gw; ++h)
                for (int c = 0; c < dh; ++c)
                    if (scales.value(l, h, c) != scales.value(l, g * gw, c))
                        throw MergeTargetError(
                            "v_proj merge needs uniform scales within each kv group; "
                            "layer " + std::to_string(l) + " head " + std::to_string(h) +
                            " differs from its group");
        auto& wv = out.layers[static_cast<std::size_t>(l)].wv;
        for (int i = 0; i < w.cfg.d_model; ++i) {
            T* row = wv.row(i);
            for (int g = 0; g < w.cfg.n_kv_heads; ++g)
                for (int c = 0; c < dh; ++c) row[g * dh + c] *= scales.value(l, g * gw, c);
        }
    }
    return out;
}

struct MergeReport {
    MergeTarget target = MergeTarget::kAuto;
    double tolerance = 0.0;
    std::vector<double> max_abs_diff;  // one per prompt
    double worst = 0.0;
    bool pass = false;
};

// Runs the scaled original and the merged model (at identity scales) over
// every prompt and reports the largest logit difference anywhere.
template <typename T>
MergeReport verify_merge(const Weights<T>& w, const ScaleSet<T>& scales, const Weights<T>& merged,
                         const PositionScheme& scheme, const std::vector<std::vector<int>>& prompts,
                         double tolerance, MergeTarget target = MergeTarget::kAuto) {
    if (!(w.cfg.n_layers == merged.cfg.n_layers && w.cfg.n_heads == merged.cfg.n_heads &&
          w.cfg.n_kv_heads == merged.cfg.n_kv_heads && w.cfg.d_model == merged.cfg.d_model &&
          w.cfg.d_head == merged.cfg.d_head && w.cfg.vocab_size == merged.cfg.vocab_size))
        throw ShapeError("verify_merge: config mismatch between original and merged weights");
    const ScaleSet<T> ones = ScaleSet<T>::ones(merged.cfg, ScaleMode::kHead);
    MergeReport r;
    r.target = resolve_merge_target(w.cfg, target);
    r.tolerance = tolerance;
    for (const auto& prompt : prompts) {
        const Tensor<T> a = forward(prompt, w, scales, scheme);
        const Tensor<T> b = forward(prompt, merged, ones, scheme);
        double worst = 0.0;
        for (std::size_t i = 0; i < a.data.size(); ++i)
            worst = std::max(worst, std::abs(static_cast<double>(a.data[i]) - static_cast<double>(b.data[i])));
        r.max_abs_diff.push_back(worst);
        r.worst = std::max(r.worst, worst);
    }
    r.pass = r.worst <= tolerance;
    return r;
}

}  // namespace seal
