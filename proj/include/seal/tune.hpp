#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "seal/backward.hpp"
#include "seal/optim.hpp"
#include "seal/rng.hpp"
#include "seal/tasks.hpp"
#include "seal/tokenizer.hpp"

namespace seal {

namespace detail {

// Full training sequence for a sample: bos, prompt, answer sentinel, answer,
// eos. The sentinel is what the evaluator feeds to start generation, so
// training must see the same boundary.
inline std::vector<int> training_tokens(const Tokenizer& tok, const Sample& s) {
    std::vector<int> seq;
    seq.reserve(s.prompt_tokens.size() + s.answer_tokens.size() + 3);
    seq.push_back(tok.bos_id);
    seq.insert(seq.end(), s.prompt_tokens.begin(), s.prompt_tokens.end());
    seq.push_back(tok.ans_id);
    seq.insert(seq.end(), s.answer_tokens.begin(), s.answer_tokens.end());
    seq.push_back(tok.eos_id);
    return seq;
}

// Next-token targets; the final position has nothing to predict.
inline void next_token_targets(const std::vector<int>& seq, std::vector<int>& targets,
                               std::vector<std::uint8_t>& mask) {
    const std::size_t n = seq.size();
    targets.assign(n, 0);
    mask.assign(n, 0);
    for (std::size_t t = 0; t + 1 < n; ++t) {
        targets[t] = seq[t + 1];
        mask[t] = 1;
    }
}

// Mask restricted to predictions of the answer tokens and the closing eos:
// positions 1+prompt_len .. n-2 predict exactly that span.
inline void answer_mask(const Sample& s, std::size_t seq_len, std::vector<std::uint8_t>& mask) {
    mask.assign(seq_len, 0);
    const std::size_t first = 1 + s.prompt_tokens.size();
    for (std::size_t t = first; t + 1 < seq_len; ++t) mask[t] = 1;
}

template <typename T>
double grad_global_norm(const Grads<T>& g) {
    double ss = 0.0;
    g.w.for_each_tensor([&ss](const std::string&, const Tensor<T>& t) {
        for (const T v : t.data) ss += static_cast<double>(v) * static_cast<double>(v);
    });
    return std::sqrt(ss);
}

} // namespace detail

struct TrainHyper {
    double lr = 1e-3;
    int epochs = 1;
    int batch = 1;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double weight_decay = 0.0;
    double clip_norm = 1.0;  // global grad-norm clip; 0 disables
    std::uint64_t seed = 1;
    bool shuffle = true;
    // restrict the loss to answer positions (plus closing eos); concentrates
    // the gradient on the retrieval mapping instead of unpredictable filler
    bool answer_loss = false;

    void validate() const {
        if (epochs < 0 || batch < 1) throw TrainingError("bad epochs/batch");
        if (!(lr >= 0.0)) throw TrainingError("bad learning rate");
    }
};

struct TrainReport {
    std::vector<double> losses;  // one entry per optimizer step
    long steps = 0;
    double wall_seconds = 0.0;
};

// Language-model pretraining over task samples: full next-token loss on the
// whole sequence, AdamW over every weight tensor, per-epoch shuffles drawn
// from the hyper seed so reruns are bit-identical.
template <typename T>
TrainReport train_base(Weights<T>& w, const Tokenizer& tok, const std::vector<Sample>& data,
                       const TrainHyper& hyper, const PositionScheme& scheme) {
    hyper.validate();
    if (data.empty()) throw TrainingError("train_base needs a nonempty corpus");
    const auto t0 = std::chrono::steady_clock::now();

    AdamWHyper oh;
    oh.lr = hyper.lr;
    oh.beta1 = hyper.beta1;
    oh.beta2 = hyper.beta2;
    oh.weight_decay = hyper.weight_decay;
    std::vector<AdamWState<T>> states;
    w.for_each_tensor([&](const std::string&, const Tensor<T>& t) {
        states.emplace_back(t.data.size(), oh);
    });

    TrainReport report;
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<int> targets;
    std::vector<std::uint8_t> mask;
    const auto ones = ScaleSet<T>::ones(w.cfg, ScaleMode::kHead);

    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        if (hyper.shuffle) {
            Rng rng(derive_seed(hyper.seed, static_cast<std::uint64_t>(epoch)));
            for (std::size_t i = order.size(); i > 1; --i)
                std::swap(order[i - 1], order[uniform_int(rng, i)]);
        }
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(hyper.batch)) {
            const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(hyper.batch));
            Grads<T> acc;
            double loss_sum = 0.0;
            for (std::size_t i = start; i < stop; ++i) {
                const auto seq = detail::training_tokens(tok, data[order[i]]);
                detail::next_token_targets(seq, targets, mask);
                if (hyper.answer_loss) detail::answer_mask(data[order[i]], seq.size(), mask);
                auto lg = loss_and_gradients(seq, targets, mask, w, ones, scheme,
                                             GradMode::kAllWeights);
                if (!std::isfinite(static_cast<double>(lg.loss)))
                    throw TrainingError("train_base loss diverged (non-finite)");
                loss_sum += static_cast<double>(lg.loss);
                if (i == start) {
                    acc = std::move(lg.grads);
                } else {
                    std::vector<Tensor<T>*> dst;
                    acc.w.for_each_tensor([&dst](const std::string&, Tensor<T>& t) { dst.push_back(&t); });
                    std::size_t n = 0;
                    lg.grads.w.for_each_tensor([&](const std::string&, const Tensor<T>& t) {
                        auto& d = dst[n++]->data;
                        for (std::size_t k = 0; k < d.size(); ++k) d[k] += t.data[k];
                    });
                }
            }
            const T inv = T(1) / T(stop - start);
            acc.w.for_each_tensor([&](const std::string&, Tensor<T>& t) {
                for (T& v : t.data) v *= inv;
            });
            if (hyper.clip_norm > 0.0) {
                const double norm = detail::grad_global_norm(acc);
                if (norm > hyper.clip_norm) {
                    const T k = T(hyper.clip_norm / norm);
                    acc.w.for_each_tensor([&](const std::string&, Tensor<T>& t) {
                        for (T& v : t.data) v *= k;
                    });
                }
            }
            std::size_t ti = 0;
            std::vector<const Tensor<T>*> gsrc;
            acc.w.for_each_tensor([&gsrc](const std::string&, const Tensor<T>& t) { gsrc.push_back(&t); });
            w.for_each_tensor([&](const std::string&, Tensor<T>& t) {
                adamw_step(t.data, gsrc[ti]->data, states[ti]);
                ++ti;
            });
            report.losses.push_back(loss_sum / static_cast<double>(stop - start));
            report.steps += 1;
        }
    }
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

struct TuneConfig {
    ScaleMode mode = ScaleMode::kHead;
    double lr = 1e-2;
    int epochs = 1;
    int batch = 1;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double weight_decay = 0.0;

    void validate() const {
        if (epochs < 0 || batch < 1) throw TrainingError("bad epochs/batch");
        if (!(lr >= 0.0)) throw TrainingError("bad learning rate");
    }
};

struct ScaleStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double frac_below_one = 0.0;
    double frac_above_one = 0.0;
};

template <typename T>
ScaleStats scale_stats(const ScaleSet<T>& s) {
    ScaleStats st;
    if (s.values.empty()) return st;
    st.min = st.max = static_cast<double>(s.values[0]);
    double sum = 0.0;
    long below = 0, above = 0;
    for (const T v : s.values) {
        const double d = static_cast<double>(v);
        st.min = std::min(st.min, d);
        st.max = std::max(st.max, d);
        sum += d;
        if (d < 1.0) ++below;
        if (d > 1.0) ++above;
    }
    st.mean = sum / static_cast<double>(s.values.size());
    st.frac_below_one = static_cast<double>(below) / static_cast<double>(s.values.size());
    st.frac_above_one = static_cast<double>(above) / static_cast<double>(s.values.size());
    return st;
}

template <typename T>
struct TuneReport {
    ScaleSet<T> scales;
    std::vector<double> losses;  // one entry per optimizer step
    long steps = 0;
    double wall_seconds = 0.0;
};

// Scale-only adaptation: base weights frozen, cross-entropy on the answer
// span only, AdamW at a constant learning rate, samples visited in corpus
// order with no shuffling.
template <typename T>
TuneReport<T> tune_scales(const Weights<T>& w, const Tokenizer& tok, const std::vector<Sample>& data,
                          const TuneConfig& cfg, const PositionScheme& scheme) {
    cfg.validate();
    if (data.empty()) throw TrainingError("tune_scales needs a nonempty tuning set");
    const auto t0 = std::chrono::steady_clock::now();

    TuneReport<T> report;
    report.scales = ScaleSet<T>::ones(w.cfg, cfg.mode);

    AdamWHyper oh;
    oh.lr = cfg.lr;
    oh.beta1 = cfg.beta1;
    oh.beta2 = cfg.beta2;
    oh.weight_decay = cfg.weight_decay;
    AdamWState<T> state(report.scales.values.size(), oh);

    std::vector<int> targets;
    std::vector<std::uint8_t> mask;
    std::vector<T> acc(report.scales.values.size(), T(0));

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t start = 0; start < data.size(); start += static_cast<std::size_t>(cfg.batch)) {
            const std::size_t stop = std::min(data.size(), start + static_cast<std::size_t>(cfg.batch));
            std::fill(acc.begin(), acc.end(), T(0));
            double loss_sum = 0.0;
            for (std::size_t i = start; i < stop; ++i) {
                const auto seq = detail::training_tokens(tok, data[i]);
                detail::next_token_targets(seq, targets, mask);
                detail::answer_mask(data[i], seq.size(), mask);
                auto lg = loss_and_gradients(seq, targets, mask, w, report.scales, scheme,
                                             GradMode::kScalesOnly);
                if (!std::isfinite(static_cast<double>(lg.loss)))
                    throw TrainingError("tune_scales loss diverged (non-finite)");
                loss_sum += static_cast<double>(lg.loss);
                for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += lg.grads.scales[k];
            }
            const T inv = T(1) / T(stop - start);
            for (T& v : acc) v *= inv;
            adamw_step(report.scales.values, acc, state);
            report.losses.push_back(loss_sum / static_cast<double>(stop - start));
            report.steps += 1;
        }
    }
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace seal
