#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "seal/model.hpp"

namespace seal {

// Per-head logit attribution at one position: the unembedding applied to the
// head's residual contribution, deliberately skipping the final norm. The
// true post-norm logits ride along for side-by-side display.
struct DirectEffectReport {
    int n_layers = 0;
    int n_heads = 0;
    int probe_pos = 0;
    std::vector<int> targets;
    std::vector<double> delta;        // [L * H * n_targets], layer-major
    std::vector<double> final_logits;  // post-norm logits of the targets

    double at(int l, int h, int ti) const {
        return delta[static_cast<std::size_t>((l * n_heads + h) * static_cast<int>(targets.size()) + ti)];
    }
};

template <typename T>
DirectEffectReport direct_effect(const Weights<T>& w, const ScaleSet<T>& scales,
                                 const std::vector<int>& tokens, const PositionScheme& scheme,
                                 int probe_pos, const std::vector<int>& targets) {
    if (probe_pos < 0) probe_pos = static_cast<int>(tokens.size()) - 1;
    if (probe_pos < 0 || probe_pos >= static_cast<int>(tokens.size()))
        throw LengthError("direct_effect probe position out of range");
    if (targets.empty()) throw TokenError("direct_effect needs at least one target token");
    for (int t : targets)
        if (t < 0 || t >= w.cfg.vocab_size) throw TokenError("direct_effect target outside vocabulary");

    const Trace<T> tr = forward_trace(tokens, w, scales, scheme);
    const Tensor<T> contrib = head_contributions_at(tr, w, scales, probe_pos);

    DirectEffectReport r;
    r.n_layers = w.cfg.n_layers;
    r.n_heads = w.cfg.n_heads;
    r.probe_pos = probe_pos;
    r.targets = targets;
    r.delta.assign(static_cast<std::size_t>(w.cfg.n_layers * w.cfg.n_heads) * targets.size(), 0.0);
    std::size_t k = 0;
    for (int l = 0; l < w.cfg.n_layers; ++l)
        for (int h = 0; h < w.cfg.n_heads; ++h)
            for (int target : targets) {
                const T* u = w.unembed.row(target);
                const T* c = &contrib.at(l, h, 0);
                T acc = 0;
                for (int i = 0; i < w.cfg.d_model; ++i) acc += u[i] * c[i];
                r.delta[k++] = static_cast<double>(acc);
            }
    for (int target : targets)
        r.final_logits.push_back(static_cast<double>(tr.logits.at(probe_pos, target)));
    return r;
}

// Normalized sum of score differences over a shared length grid. A flat
// baseline has no scale to normalize by; that case is flagged, never zero.
struct TransferScore {
    double value = std::numeric_limits<double>::quiet_NaN();
    bool defined = false;
    double numerator = 0.0;
    double denominator = 0.0;
    double base_min = 0.0;
    double base_max = 0.0;
};

inline TransferScore transferability(const std::vector<double>& baseline,
                                     const std::vector<double>& tuned) {
    if (baseline.size() != tuned.size()) throw ShapeError("transferability needs matching length grids");
    if (baseline.size() < 2) throw ShapeError("transferability needs at least two lengths");
    TransferScore s;
    s.base_min = baseline[0];
    s.base_max = baseline[0];
    for (double b : baseline) {
        s.base_min = std::min(s.base_min, b);
        s.base_max = std::max(s.base_max, b);
    }
    for (std::size_t i = 0; i < baseline.size(); ++i) s.numerator += tuned[i] - baseline[i];
    s.denominator = s.base_max - s.base_min;
    if (s.denominator == 0.0) return s;  // undefined, flagged by default state
    s.defined = true;
    s.value = s.numerator / s.denominator;
    return s;
}

// Full tuning-task x eval-task grid. tuned[a][b] are task-B scores evaluated
// with task-A scales; baseline[b] are task-B scores with identity scales.
inline std::vector<std::vector<TransferScore>> transfer_matrix(
    const std::vector<std::vector<double>>& baseline,
    const std::vector<std::vector<std::vector<double>>>& tuned) {
    std::vector<std::vector<TransferScore>> m;
    for (const auto& row : tuned) {
        if (row.size() != baseline.size()) throw ShapeError("transfer_matrix shape mismatch");
        std::vector<TransferScore> out_row;
        for (std::size_t b = 0; b < row.size(); ++b)
            out_row.push_back(transferability(baseline[b], row[b]));
        m.push_back(std::move(out_row));
    }
    return m;
}

}  // namespace seal
