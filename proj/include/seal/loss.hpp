#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "seal/errors.hpp"
#include "seal/tensor.hpp"

namespace seal {

// Mean over masked positions of -log softmax(logits[t])[targets[t]].
// Computed with a per-row max-subtracted log-sum-exp. Throws if the mask
// selects nothing: an accidental all-zero mask must never read as a perfect
// loss of 0.
template <typename T>
T cross_entropy_masked(const Tensor<T>& logits, const std::vector<int>& targets,
                       const std::vector<std::uint8_t>& mask) {
    if (logits.shape.size() != 2) throw ShapeError("cross_entropy_masked expects [T x V] logits");
    const int tt = logits.shape[0], vv = logits.shape[1];
    if (static_cast<int>(targets.size()) != tt || static_cast<int>(mask.size()) != tt)
        throw ShapeError("cross_entropy_masked target/mask length mismatch");
    T total = 0;
    int count = 0;
    for (int t = 0; t < tt; ++t) {
        if (!mask[t]) continue;
        const int tgt = targets[t];
        if (tgt < 0 || tgt >= vv) throw TokenError("cross_entropy_masked target id out of range");
        const T* row = logits.row(t);
        T mx = row[0];
        for (int v = 1; v < vv; ++v)
            if (row[v] > mx) mx = row[v];
        T sum = 0;
        for (int v = 0; v < vv; ++v) sum += std::exp(row[v] - mx);
        total += std::log(sum) - (row[tgt] - mx);
        ++count;
    }
    if (count == 0) throw EmptyMaskError("loss mask selects no positions");
    return total / T(count);
}

// Gradient of cross_entropy_masked w.r.t. logits:
// (softmax(logits[t]) - onehot(targets[t])) / n_masked on masked rows, zero
// elsewhere.
template <typename T>
Tensor<T> cross_entropy_masked_grad(const Tensor<T>& logits, const std::vector<int>& targets,
                                    const std::vector<std::uint8_t>& mask) {
    const int tt = logits.shape[0], vv = logits.shape[1];
    int count = 0;
    for (int t = 0; t < tt; ++t)
        if (mask[t]) ++count;
    if (count == 0) throw EmptyMaskError("loss mask selects no positions");
    Tensor<T> grad({tt, vv});
    const T inv = T(1) / T(count);
    for (int t = 0; t < tt; ++t) {
        if (!mask[t]) continue;
        const T* row = logits.row(t);
        T* grow = grad.row(t);
        T mx = row[0];
        for (int v = 1; v < vv; ++v)
            if (row[v] > mx) mx = row[v];
        T sum = 0;
        for (int v = 0; v < vv; ++v) {
            grow[v] = std::exp(row[v] - mx);
            sum += grow[v];
        }
        const T isum = T(1) / sum;
        for (int v = 0; v < vv; ++v) grow[v] *= isum * inv;
        grow[targets[t]] -= inv;
    }
    return grad;
}

} // namespace seal
