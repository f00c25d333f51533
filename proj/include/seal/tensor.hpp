#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "seal/errors.hpp"

namespace seal {

// Dense row-major tensor. Shape times are small here (model is tiny), so
// this stays deliberately simple: a shape vector plus flat storage.
template <typename T>
struct Tensor {
    std::vector<int> shape;
    std::vector<T> data;

    Tensor() = default;
    explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
        data.assign(static_cast<std::size_t>(numel_of(shape)), T(0));
    }

    static std::int64_t numel_of(const std::vector<int>& s) {
        std::int64_t n = 1;
        for (int d : s) {
            if (d <= 0) throw ShapeError("tensor dimension must be positive");
            n *= d;
        }
        return n;
    }

    std::int64_t numel() const { return static_cast<std::int64_t>(data.size()); }
    int dim(int i) const { return shape.at(static_cast<std::size_t>(i)); }

    T& at(int i) { return data[static_cast<std::size_t>(i)]; }
    const T& at(int i) const { return data[static_cast<std::size_t>(i)]; }
    T& at(int i, int j) {
        return data[static_cast<std::size_t>(i) * shape[1] + j];
    }
    const T& at(int i, int j) const {
        return data[static_cast<std::size_t>(i) * shape[1] + j];
    }
    T& at(int i, int j, int k) {
        return data[(static_cast<std::size_t>(i) * shape[1] + j) * shape[2] + k];
    }
    const T& at(int i, int j, int k) const {
        return data[(static_cast<std::size_t>(i) * shape[1] + j) * shape[2] + k];
    }

    T* row(int i) { return data.data() + static_cast<std::size_t>(i) * shape.back(); }
    const T* row(int i) const {
        return data.data() + static_cast<std::size_t>(i) * shape.back();
    }

    void fill(T v) { std::fill(data.begin(), data.end(), v); }
};

// c[i][j] = sum_t a[i][t] * b[t][j]. Loop order i-t-j keeps the inner loop
// contiguous in both b and c.
template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b) {
    if (a.shape.size() != 2 || b.shape.size() != 2)
        throw ShapeError("matmul expects 2-d tensors");
    if (a.shape[1] != b.shape[0])
        throw ShapeError("matmul inner dimensions disagree: " +
                         std::to_string(a.shape[1]) + " vs " +
                         std::to_string(b.shape[0]));
    const int m = a.shape[0], k = a.shape[1], n = b.shape[1];
    Tensor<T> c({m, n});
    for (int i = 0; i < m; ++i) {
        const T* arow = a.row(i);
        T* crow = c.row(i);
        for (int t = 0; t < k; ++t) {
            const T av = arow[t];
            const T* brow = b.row(t);
            for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

// c[i][j] = sum_t a[i][t] * b[j][t], i.e. a times b transposed. Both
// operands are walked along contiguous rows.
template <typename T>
Tensor<T> matmul_nt(const Tensor<T>& a, const Tensor<T>& b) {
    if (a.shape.size() != 2 || b.shape.size() != 2)
        throw ShapeError("matmul_nt expects 2-d tensors");
    if (a.shape[1] != b.shape[1])
        throw ShapeError("matmul_nt inner dimensions disagree");
    const int m = a.shape[0], k = a.shape[1], n = b.shape[0];
    Tensor<T> c({m, n});
    for (int i = 0; i < m; ++i) {
        const T* arow = a.row(i);
        T* crow = c.row(i);
        for (int j = 0; j < n; ++j) {
            const T* brow = b.row(j);
            T acc = 0;
            for (int t = 0; t < k; ++t) acc += arow[t] * brow[t];
            crow[j] = acc;
        }
    }
    return c;
}

// In-place stable softmax over `v[0..n)`.
template <typename T>
void softmax_inplace(T* v, int n) {
    T mx = v[0];
    for (int i = 1; i < n; ++i)
        if (v[i] > mx) mx = v[i];
    T sum = 0;
    for (int i = 0; i < n; ++i) {
        v[i] = std::exp(v[i] - mx);
        sum += v[i];
    }
    const T inv = T(1) / sum;
    for (int i = 0; i < n; ++i) v[i] *= inv;
}

// Softmax along `axis`, max-subtracted for stability.
template <typename T>
Tensor<T> softmax(const Tensor<T>& x, int axis) {
    const int nd = static_cast<int>(x.shape.size());
    if (axis < 0) axis += nd;
    if (axis < 0 || axis >= nd) throw ShapeError("softmax axis out of range");
    std::int64_t outer = 1, inner = 1;
    for (int i = 0; i < axis; ++i) outer *= x.shape[i];
    for (int i = axis + 1; i < nd; ++i) inner *= x.shape[i];
    const int n = x.shape[axis];
    Tensor<T> y = x;
    for (std::int64_t o = 0; o < outer; ++o) {
        for (std::int64_t in = 0; in < inner; ++in) {
            T* base = y.data.data() + o * n * inner + in;
            T mx = base[0];
            for (int i = 1; i < n; ++i) {
                const T v = base[static_cast<std::size_t>(i) * inner];
                if (v > mx) mx = v;
            }
            T sum = 0;
            for (int i = 0; i < n; ++i) {
                T& v = base[static_cast<std::size_t>(i) * inner];
                v = std::exp(v - mx);
                sum += v;
            }
            const T inv = T(1) / sum;
            for (int i = 0; i < n; ++i) base[static_cast<std::size_t>(i) * inner] *= inv;
        }
    }
    return y;
}

// y[i] = weight[i] * x[i] / sqrt(mean(x^2) + eps), written into out.
template <typename T>
void rms_norm_into(const T* x, const T* weight, int d, T eps, T* out) {
    T ss = 0;
    for (int i = 0; i < d; ++i) ss += x[i] * x[i];
    const T inv = T(1) / std::sqrt(ss / T(d) + eps);
    for (int i = 0; i < d; ++i) out[i] = weight[i] * x[i] * inv;
}

template <typename T>
Tensor<T> rms_norm(const Tensor<T>& x, const Tensor<T>& weight, T eps) {
    if (x.shape.size() != 1 || weight.shape.size() != 1 || x.shape[0] != weight.shape[0])
        throw ShapeError("rms_norm expects matching 1-d tensors");
    Tensor<T> y({x.shape[0]});
    rms_norm_into(x.data.data(), weight.data.data(), x.shape[0], eps, y.data.data());
    return y;
}

template <typename T>
T silu(T x) {
    return x / (T(1) + std::exp(-x));
}

} // namespace seal
