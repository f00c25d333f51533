#pragma once

#include <vector>

namespace seal {

// Central-difference gradient oracle: g[i] = (f(x+h e_i) - f(x-h e_i)) / 2h.
// f must be deterministic. x is perturbed in place and restored exactly
// (the original value is saved, not recomputed).
template <typename T, typename F>
std::vector<T> finite_diff_grad(F&& f, std::vector<T> x, T h) {
    std::vector<T> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const T orig = x[i];
        x[i] = orig + h;
        const T fp = f(x);
        x[i] = orig - h;
        const T fm = f(x);
        x[i] = orig;
        g[i] = (fp - fm) / (T(2) * h);
    }
    return g;
}

} // namespace seal
