#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "seal/loss.hpp"
#include "seal/model.hpp"

namespace seal {

enum class GradMode { kAllWeights, kScalesOnly };

// Gradients from one backward pass. Scale gradients are always produced
// (they share the ScaleSet's value layout); weight gradients only under
// kAllWeights, in which case `w` mirrors the model tensor-for-tensor.
template <typename T>
struct Grads {
    GradMode mode = GradMode::kScalesOnly;
    Weights<T> w;
    std::vector<T> scales;
};

namespace detail {

// out[i][j] += sum_t a[t][i] * b[t][j]
template <typename T>
void matmul_tn_acc(const Tensor<T>& a, const Tensor<T>& b, Tensor<T>& out) {
    const int tt = a.shape[0], m = a.shape[1], n = b.shape[1];
    for (int t = 0; t < tt; ++t) {
        const T* arow = a.row(t);
        const T* brow = b.row(t);
        for (int i = 0; i < m; ++i) {
            const T coef = arow[i];
            if (coef == T(0)) continue;
            T* orow = out.row(i);
            for (int j = 0; j < n; ++j) orow[j] += coef * brow[j];
        }
    }
}

// Reverse of rms_norm over rows: writes dL/dx into dx (overwriting) and,
// when dgamma is non-null, accumulates dL/dgamma.
template <typename T>
void rms_norm_rows_backward(const Tensor<T>& x, const Tensor<T>& gamma,
                            const Tensor<T>& dy, T eps, Tensor<T>& dx,
                            Tensor<T>* dgamma) {
    const int tt = x.shape[0], d = x.shape[1];
    const T* g = gamma.data.data();
    for (int t = 0; t < tt; ++t) {
        const T* xr = x.row(t);
        const T* dyr = dy.row(t);
        T* dxr = dx.row(t);
        T ss = 0;
        for (int i = 0; i < d; ++i) ss += xr[i] * xr[i];
        const T inv = T(1) / std::sqrt(ss / T(d) + eps);
        T dot = 0;
        for (int i = 0; i < d; ++i) dot += dyr[i] * g[i] * xr[i];
        const T k = dot * inv * inv * inv / T(d);
        for (int i = 0; i < d; ++i) dxr[i] = dyr[i] * g[i] * inv - xr[i] * k;
        if (dgamma) {
            T* dgr = dgamma->data.data();
            for (int i = 0; i < d; ++i) dgr[i] += dyr[i] * xr[i] * inv;
        }
    }
}

template <typename T>
bool row_is_zero(const T* r, int n) {
    for (int i = 0; i < n; ++i)
        if (r[i] != T(0)) return false;
    return true;
}

} // namespace detail

// Reverse-mode pass over a recorded forward. dlogits is dLoss/dlogits
// [T x V]; the position scheme must match the forward call.
template <typename T>
Grads<T> backward(const Trace<T>& tr, const Weights<T>& w, const ScaleSet<T>& scales,
                  const PositionScheme& scheme, const Tensor<T>& dlogits, GradMode mode) {
    const ModelConfig& cfg = w.cfg;
    const int tt = static_cast<int>(tr.tokens.size());
    const int d = cfg.d_model, dh = cfg.d_head, hh = cfg.n_heads;
    const int gw = cfg.group_width(), half = dh / 2, hq = hh * dh,
              hk = cfg.n_kv_heads * dh;
    const T inv_sqrt = T(1) / T(std::sqrt(static_cast<double>(dh)));
    const T eps = T(1e-5);
    if (dlogits.shape.size() != 2 || dlogits.shape[0] != tt ||
        dlogits.shape[1] != cfg.vocab_size)
        throw ShapeError("backward dlogits shape mismatch");
    const RopeTable<T> rope = make_rope_table<T>(cfg, scheme, tt);
    const bool full = mode == GradMode::kAllWeights;

    Grads<T> g;
    g.mode = mode;
    if (full) g.w = zero_weights<T>(cfg);
    g.scales.assign(scales.values.size(), T(0));

    // Unembedding. Unmasked loss rows are exactly zero; skip them.
    Tensor<T> dxf({tt, d});
    for (int t = 0; t < tt; ++t) {
        const T* dlr = dlogits.row(t);
        if (detail::row_is_zero(dlr, cfg.vocab_size)) continue;
        T* dxr = dxf.row(t);
        for (int v = 0; v < cfg.vocab_size; ++v) {
            const T coef = dlr[v];
            if (coef == T(0)) continue;
            const T* ur = w.unembed.row(v);
            for (int i = 0; i < d; ++i) dxr[i] += coef * ur[i];
            if (full) {
                T* dur = g.w.unembed.row(v);
                const T* xr = tr.xf_norm.row(t);
                for (int i = 0; i < d; ++i) dur[i] += coef * xr[i];
            }
        }
    }

    Tensor<T> dx({tt, d});
    detail::rms_norm_rows_backward(tr.x_final, w.final_norm, dxf, eps, dx,
                                   full ? &g.w.final_norm : nullptr);

    Tensor<T> dxn({tt, d});
    Tensor<T> dmid({tt, d});
    std::vector<T> dp(static_cast<std::size_t>(tt));
    std::vector<T> dscore(static_cast<std::size_t>(tt));
    for (int l = cfg.n_layers - 1; l >= 0; --l) {
        const auto& lt = tr.layers[static_cast<std::size_t>(l)];
        const auto& lw = w.layers[static_cast<std::size_t>(l)];
        auto* gl = full ? &g.w.layers[static_cast<std::size_t>(l)] : nullptr;

        // MLP block: x_out = x_mid + silu(xn2 w1) w2
        Tensor<T> dact = matmul_nt(dx, lw.w2);
        if (full) detail::matmul_tn_acc(lt.act, dx, gl->w2);
        for (int t = 0; t < tt; ++t) {
            const T* h1r = lt.h1.row(t);
            T* dar = dact.row(t);
            for (int i = 0; i < cfg.d_ff; ++i) {
                const T s = T(1) / (T(1) + std::exp(-h1r[i]));
                dar[i] *= s * (T(1) + h1r[i] * (T(1) - s));
            }
        }
        Tensor<T> dxn2 = matmul_nt(dact, lw.w1);
        if (full) detail::matmul_tn_acc(lt.xn2, dact, gl->w1);
        detail::rms_norm_rows_backward(lt.x_mid, lw.ln2, dxn2, eps, dxn,
                                       full ? &gl->ln2 : nullptr);
        for (int t = 0; t < tt; ++t) {
            const T* a = dx.row(t);
            const T* b = dxn.row(t);
            T* o = dmid.row(t);
            for (int i = 0; i < d; ++i) o[i] = a[i] + b[i];
        }

        // Attention block: x_mid = x_in + att_res, datt_res = dmid. First
        // back through the output projection to the scaled head outputs.
        Tensor<T> dscaled({tt, hq});
        for (int t = 0; t < tt; ++t) {
            const T* dres = dmid.row(t);
            const T* rawr = lt.head_raw.row(t);
            T* dsr = dscaled.row(t);
            for (int h = 0; h < hh; ++h) {
                for (int c = 0; c < dh; ++c) {
                    const int col = h * dh + c;
                    const T* worow = lw.wo.row(col);
                    T acc = 0;
                    for (int i = 0; i < d; ++i) acc += worow[i] * dres[i];
                    dsr[col] = acc;
                    if (full) {
                        const T y = rawr[col] * scales.value(l, h, c);
                        T* dwor = gl->wo.row(col);
                        for (int i = 0; i < d; ++i) dwor[i] += y * dres[i];
                    }
                }
            }
        }
        // Scale gradients: per-channel partials over positions. A HEAD
        // gradient folds its head's channel partials in channel order, so it
        // equals the sum of the corresponding CHANNEL gradients exactly.
        // draw = dL/d(raw head output) continues down the attention core.
        Tensor<T> draw({tt, hq});
        for (int h = 0; h < hh; ++h) {
            T head_acc = 0;
            for (int c = 0; c < dh; ++c) {
                const int col = h * dh + c;
                const T sc = scales.value(l, h, c);
                T part = 0;
                for (int t = 0; t < tt; ++t) {
                    part += dscaled.at(t, col) * lt.head_raw.at(t, col);
                    draw.at(t, col) = dscaled.at(t, col) * sc;
                }
                if (scales.mode == ScaleMode::kChannel)
                    g.scales[scales.index(l, h, c)] += part;
                else
                    head_acc += part;
            }
            if (scales.mode == ScaleMode::kHead)
                g.scales[scales.index(l, h)] += head_acc;
        }

        // Attention core backward.
        Tensor<T> dq({tt, hq});
        Tensor<T> dk({tt, hk});
        Tensor<T> dv({tt, hk});
        for (int h = 0; h < hh; ++h) {
            const int grp = h / gw;
            for (int t = 0; t < tt; ++t) {
                const T* drawr = draw.row(t) + h * dh;
                for (int j = 0; j <= t; ++j) {
                    const T* vr = lt.v.row(j) + grp * dh;
                    T acc = 0;
                    for (int c = 0; c < dh; ++c) acc += drawr[c] * vr[c];
                    dp[static_cast<std::size_t>(j)] = acc;
                }
                T dot = 0;
                for (int j = 0; j <= t; ++j) {
                    const T p = lt.probs.at(h, t, j);
                    dot += p * dp[static_cast<std::size_t>(j)];
                    T* dvr = dv.row(j) + grp * dh;
                    for (int c = 0; c < dh; ++c) dvr[c] += p * drawr[c];
                }
                const T* qr = lt.q.row(t) + h * dh;
                T* dqr = dq.row(t) + h * dh;
                for (int j = 0; j <= t; ++j) {
                    const T p = lt.probs.at(h, t, j);
                    const T ds = p * (dp[static_cast<std::size_t>(j)] - dot) * inv_sqrt;
                    if (ds == T(0)) continue;
                    const T* kr = lt.k.row(j) + grp * dh;
                    T* dkr = dk.row(j) + grp * dh;
                    const T* co = rope.cos_row(t - j);
                    const T* si = rope.sin_row(t - j);
                    for (int c = 0; c < half; ++c) {
                        const T q0 = qr[2 * c], q1 = qr[2 * c + 1];
                        const T k0 = kr[2 * c], k1 = kr[2 * c + 1];
                        dqr[2 * c] += ds * (co[c] * k0 + si[c] * k1);
                        dqr[2 * c + 1] += ds * (co[c] * k1 - si[c] * k0);
                        dkr[2 * c] += ds * (co[c] * q0 - si[c] * q1);
                        dkr[2 * c + 1] += ds * (co[c] * q1 + si[c] * q0);
                    }
                }
            }
        }

        Tensor<T> dxn1 = matmul_nt(dq, lw.wq);
        {
            Tensor<T> tmp = matmul_nt(dk, lw.wk);
            for (std::size_t i = 0; i < dxn1.data.size(); ++i) dxn1.data[i] += tmp.data[i];
            tmp = matmul_nt(dv, lw.wv);
            for (std::size_t i = 0; i < dxn1.data.size(); ++i) dxn1.data[i] += tmp.data[i];
        }
        if (full) {
            detail::matmul_tn_acc(lt.xn1, dq, gl->wq);
            detail::matmul_tn_acc(lt.xn1, dk, gl->wk);
            detail::matmul_tn_acc(lt.xn1, dv, gl->wv);
        }
        detail::rms_norm_rows_backward(lt.x_in, lw.ln1, dxn1, eps, dxn,
                                       full ? &gl->ln1 : nullptr);
        for (int t = 0; t < tt; ++t) {
            const T* a = dmid.row(t);
            const T* b = dxn.row(t);
            T* o = dx.row(t);
            for (int i = 0; i < d; ++i) o[i] = a[i] + b[i];
        }
    }

    if (full) {
        for (int t = 0; t < tt; ++t) {
            T* der = g.w.embed.row(tr.tokens[static_cast<std::size_t>(t)]);
            const T* dxr = dx.row(t);
            for (int i = 0; i < d; ++i) der[i] += dxr[i];
        }
    }
    return g;
}

template <typename T>
struct LossGrads {
    T loss = 0;
    Grads<T> grads;
};

// Forward + masked cross entropy + backward in one call. targets[t] is the
// token expected after position t; mask selects which positions count.
template <typename T>
LossGrads<T> loss_and_gradients(const std::vector<int>& tokens,
                                const std::vector<int>& targets,
                                const std::vector<std::uint8_t>& mask,
                                const Weights<T>& w, const ScaleSet<T>& scales,
                                const PositionScheme& scheme, GradMode mode) {
    Trace<T> tr = forward_trace(tokens, w, scales, scheme);
    LossGrads<T> out;
    out.loss = cross_entropy_masked(tr.logits, targets, mask);
    Tensor<T> dlogits = cross_entropy_masked_grad(tr.logits, targets, mask);
    out.grads = backward(tr, w, scales, scheme, dlogits, mode);
    return out;
}

// Gradient of the masked loss w.r.t. every scale entry, base weights frozen.
template <typename T>
std::vector<T> scale_gradients(const std::vector<int>& tokens,
                               const std::vector<int>& targets,
                               const std::vector<std::uint8_t>& mask,
                               const Weights<T>& w, const ScaleSet<T>& scales,
                               const PositionScheme& scheme) {
    return loss_and_gradients(tokens, targets, mask, w, scales, scheme,
                              GradMode::kScalesOnly)
        .grads.scales;
}

} // namespace seal
