#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "seal/errors.hpp"

namespace seal {

struct AdamWHyper {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;
};

// Per-parameter-tensor optimizer state. Moments match the parameter length.
template <typename T>
struct AdamWState {
    long step = 0;
    std::vector<T> m, v;
    AdamWHyper hyper;

    AdamWState() = default;
    AdamWState(std::size_t n, AdamWHyper h)
        : m(n, T(0)), v(n, T(0)), hyper(h) {}
};

// Decoupled AdamW with bias correction and a constant learning rate:
//   p -= lr * (m_hat / (sqrt(v_hat) + eps) + weight_decay * p)
template <typename T>
void adamw_step(std::vector<T>& param, const std::vector<T>& grad, AdamWState<T>& st) {
    if (param.size() != grad.size() || param.size() != st.m.size())
        throw ShapeError("adamw_step parameter/gradient/state size mismatch");
    st.step += 1;
    const T b1 = T(st.hyper.beta1), b2 = T(st.hyper.beta2);
    const T bc1 = T(1) - T(std::pow(st.hyper.beta1, static_cast<double>(st.step)));
    const T bc2 = T(1) - T(std::pow(st.hyper.beta2, static_cast<double>(st.step)));
    const T lr = T(st.hyper.lr), eps = T(st.hyper.eps), wd = T(st.hyper.weight_decay);
    for (std::size_t i = 0; i < param.size(); ++i) {
        st.m[i] = b1 * st.m[i] + (T(1) - b1) * grad[i];
        st.v[i] = b2 * st.v[i] + (T(1) - b2) * grad[i] * grad[i];
        const T mhat = st.m[i] / bc1;
        const T vhat = st.v[i] / bc2;
        param[i] -= lr * (mhat / (std::sqrt(vhat) + eps) + wd * param[i]);
    }
}

} // namespace seal
