#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seal/model.hpp"
#include "seal/parallel.hpp"
#include "seal/tasks.hpp"
#include "seal/tokenizer.hpp"

namespace seal {

// Builds the decoding prompt <bos> prompt <ans>, generates greedily, and
// scores the detokenized continuation against the sample.
template <typename T>
double eval_sample(const Weights<T>& w, const ScaleSet<T>& scales, const PositionScheme& scheme,
                   const Tokenizer& tok, const Sample& s, int extra_new = 3) {
    std::vector<int> ids;
    ids.reserve(s.prompt_tokens.size() + 2);
    ids.push_back(tok.bos_id);
    ids.insert(ids.end(), s.prompt_tokens.begin(), s.prompt_tokens.end());
    ids.push_back(tok.ans_id);
    const int max_new = static_cast<int>(s.answer_tokens.size()) + 1 + extra_new;
    auto gen = greedy_decode(ids, w, scales, scheme, max_new, tok.eos_id);
    if (!gen.empty() && gen.back() == tok.eos_id) gen.pop_back();
    return score(tok.detokenize(gen), s);
}

struct EvalResult {
    double mean = 0.0;
    std::vector<double> per_sample;
};

template <typename T>
EvalResult evaluate(const Weights<T>& w, const ScaleSet<T>& scales, const PositionScheme& scheme,
                    const Tokenizer& tok, const std::vector<Sample>& samples, int threads = 1) {
    if (samples.empty()) throw GenerationError("evaluate needs at least one sample");
    EvalResult r;
    r.per_sample.assign(samples.size(), 0.0);
    parallel_for(samples.size(), threads, [&](std::size_t i) {
        r.per_sample[i] = eval_sample(w, scales, scheme, tok, samples[i]);
    });
    for (double v : r.per_sample) r.mean += v;
    r.mean /= static_cast<double>(samples.size());
    return r;
}

struct LengthScore {
    int length = 0;
    double score = 0.0;
};

// Score-vs-length curve. Each length gets its own derived seed so curves are
// reproducible pointwise.
template <typename T>
std::vector<LengthScore> score_vs_length(const Weights<T>& w, const ScaleSet<T>& scales,
                                         const PositionScheme& scheme, const Tokenizer& tok,
                                         TaskSpec spec, const std::vector<int>& lengths, int n,
                                         int threads = 1) {
    std::vector<LengthScore> out;
    const std::uint64_t base_seed = spec.seed;
    for (int len : lengths) {
        spec.target_len = len;
        spec.seed = derive_seed(base_seed, static_cast<std::uint64_t>(len));
        auto ds = generate_dataset(tok, spec, n);
        out.push_back({len, evaluate(w, scales, scheme, tok, ds, threads).mean});
    }
    return out;
}

struct GridScore {
    double depth = 0.0;
    int length = 0;
    double score = 0.0;
};

// Needle-position grid: depth fractions crossed with prompt lengths.
template <typename T>
std::vector<GridScore> niah_grid(const Weights<T>& w, const ScaleSet<T>& scales,
                                 const PositionScheme& scheme, const Tokenizer& tok, TaskSpec spec,
                                 const std::vector<double>& depths, const std::vector<int>& lengths,
                                 int n, int threads = 1) {
    spec.kind = TaskKind::kNiah;
    std::vector<GridScore> out;
    const std::uint64_t base_seed = spec.seed;
    for (double d : depths) {
        for (int len : lengths) {
            spec.needle_depth = d;
            spec.target_len = len;
            spec.seed = derive_seed(derive_seed(base_seed, static_cast<std::uint64_t>(len)),
                                    static_cast<std::uint64_t>(d * 1000));
            auto ds = generate_dataset(tok, spec, n);
            out.push_back({d, len, evaluate(w, scales, scheme, tok, ds, threads).mean});
        }
    }
    return out;
}

}  // namespace seal
