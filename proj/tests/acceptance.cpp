// Acceptance gate: ten checks, one PASS/FAIL line each, nonzero exit on any
// failure. Later checks reuse the model trained in check 5, so execution
// order differs from report order.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iterator>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "seal/analysis.hpp"
#include "seal/backward.hpp"
#include "seal/checkpoint.hpp"
#include "seal/csv.hpp"
#include "seal/eval.hpp"
#include "seal/extend.hpp"
#include "seal/finite_diff.hpp"
#include "seal/merge.hpp"
#include "seal/probe.hpp"
#include "seal/tune.hpp"

using namespace seal;
namespace fs = std::filesystem;

namespace {

// ---- the phenomenon recipe ----------------------------------------------
// Base-model corpus: line retrieval on short-skewed lengths. Lines draw keys
// from BOTH content pools so key copying is the only viable circuit (inside
// one pool, noun-given-adjective is predictable and gets memorized instead);
// scale tuning later sees only the tune pool.
constexpr int kCorpusLens[] = {32, 48, 64, 96, 128, 160, 192, 224, 256};
constexpr int kCorpusNs[] = {2700, 2700, 3100, 2300, 2200, 1400, 1300, 1100, 1200};
constexpr double kBaseLr = 1e-3;
constexpr int kBaseEpochs = 1;
constexpr std::uint64_t kBaseSeed = 1;
// SEAL-H hyperparameters are pinned by the acceptance statement itself.
constexpr int kTuneSamples = 50;
constexpr double kSealHLr = 1e-2;
constexpr double kSealCLr = 2e-2;
constexpr int kTuneLen = 512;
constexpr int kEvalN = 50;
// Pruning sweep operating points.
constexpr int kSweepMid = 128;
constexpr int kSweepLong = 384;
constexpr int kSweepN = 32;

struct Criterion {
    int id = 0;
    std::string desc;
    bool pass = false;
    std::string detail;
};

std::vector<Criterion> g_results;

void record(int id, const std::string& desc, bool pass, const std::string& detail) {
    g_results.push_back({id, desc, pass, detail});
    std::cerr << "[" << (pass ? "pass" : "FAIL") << "] criterion " << id << ": " << detail << "\n";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt3(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

ModelConfig toy_config(int kvh) {
    ModelConfig cfg;
    cfg.n_kv_heads = kvh;
    return cfg;  // defaults are the toy model
}

std::vector<int> random_prompt(Rng& rng, int min_len, int max_len, int vocab) {
    const int len = min_len + static_cast<int>(uniform_int(
                                  rng, static_cast<std::uint64_t>(max_len - min_len + 1)));
    std::vector<int> t(static_cast<std::size_t>(len));
    for (auto& v : t) v = static_cast<int>(uniform_int(rng, static_cast<std::uint64_t>(vocab)));
    return t;
}

template <typename T>
ScaleSet<T> random_scales(const ModelConfig& cfg, ScaleMode mode, std::uint64_t seed) {
    auto s = ScaleSet<T>::ones(cfg, mode);
    Rng rng(seed);
    for (auto& v : s.values) v = T(0.5 + uniform(rng));
    return s;
}

// ---- criterion 1: merge equivalence --------------------------------------

template <typename T>
double merge_worst_diff(const Weights<T>& w, const ScaleSet<T>& scales, int n_prompts,
                        std::uint64_t seed) {
    const auto merged = merge_scales(w, scales, MergeTarget::kAuto);
    const auto ones = ScaleSet<T>::ones(w.cfg, ScaleMode::kHead);
    double worst = 0.0;
    for (int i = 0; i < n_prompts; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        const auto p = random_prompt(rng, 8, w.cfg.max_train_pos, w.cfg.vocab_size);
        const auto a = forward(p, w, scales, PositionScheme::standard());
        const auto b = forward(p, merged, ones, PositionScheme::standard());
        for (std::size_t k = 0; k < a.data.size(); ++k)
            worst = std::max(worst, std::abs(static_cast<double>(a.data[k]) -
                                             static_cast<double>(b.data[k])));
    }
    return worst;
}

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string desc = "merge equivalence over 100 random prompts, scales in [0.5, 1.5]";
    try {
        const auto mha = random_weights<float>(toy_config(8), 301);
        const auto gqa = random_weights<float>(toy_config(4), 302);
        const auto s_mha = random_scales<float>(mha.cfg, ScaleMode::kChannel, 303);
        const auto s_gqa = random_scales<float>(gqa.cfg, ScaleMode::kHead, 304);

        const double f32_mha = merge_worst_diff(mha, s_mha, 100, 311);
        const double f32_gqa = merge_worst_diff(gqa, s_gqa, 100, 312);
        const auto mha64 = weights_cast<double>(mha);
        const auto gqa64 = weights_cast<double>(gqa);
        const double f64_mha = merge_worst_diff(mha64, s_mha.cast<double>(), 100, 311);
        const double f64_gqa = merge_worst_diff(gqa64, s_gqa.cast<double>(), 100, 312);
        const double secs = seconds_since(t0);

        const bool pass = f32_mha <= 1e-5 && f32_gqa <= 1e-5 && f64_mha <= 1e-10 &&
                          f64_gqa <= 1e-10 && secs < 120.0;
        record(1, desc, pass,
               "worst |logit diff| f32 mha " + fmt_double(f32_mha) + " / gqa " +
                   fmt_double(f32_gqa) + " (tol 1e-5), f64 mha " + fmt_double(f64_mha) +
                   " / gqa " + fmt_double(f64_gqa) + " (tol 1e-10), " + fmt3(secs) + "s");
    } catch (const std::exception& e) {
        record(1, desc, false, std::string("exception: ") + e.what());
    }
}

// ---- criterion 2: identity / pruning / head-channel equalities -----------

void criterion_2() {
    const std::string desc = "identity, pruning, and head=channel scale equalities are exact";
    try {
        const auto w = random_weights<float>(toy_config(4), 321);
        Rng rng(322);
        const auto p = random_prompt(rng, 48, 48, w.cfg.vocab_size);
        const auto scheme = PositionScheme::standard();
        const auto ones_h = ScaleSet<float>::ones(w.cfg, ScaleMode::kHead);
        const auto base = forward(p, w, ones_h, scheme);

        bool ok = true;
        std::string why;

        const auto ident = forward(p, w, ScaleSet<float>::ones(w.cfg, ScaleMode::kChannel), scheme);
        if (base.data != ident.data) { ok = false; why = "all-ones scales changed logits"; }

        auto zeroed = ones_h;
        zeroed.head_ref(2, 5) = 0.0f;
        const auto za = forward(p, w, zeroed, scheme);
        const auto zb = forward(p, w, prune_head(ones_h, 2, 5), scheme);
        if (za.data != zb.data) { ok = false; why = "scale 0 differs from prune_head"; }

        auto head_c = ones_h;
        for (auto& v : head_c.values) v = 1.3f;
        auto chan_c = ScaleSet<float>::ones(w.cfg, ScaleMode::kChannel);
        for (auto& v : chan_c.values) v = 1.3f;
        const auto ha = forward(p, w, head_c, scheme);
        const auto hb = forward(p, w, chan_c, scheme);
        if (ha.data != hb.data) { ok = false; why = "HEAD c differs from constant CHANNEL c"; }

        record(2, desc, ok, ok ? "all three equalities bitwise exact" : why);
    } catch (const std::exception& e) {
        record(2, desc, false, std::string("exception: ") + e.what());
    }
}

// ---- criterion 3: gradient correctness ------------------------------------

void criterion_3() {
    const std::string desc = "scale gradients match central finite differences (f64, h=1e-5)";
    try {
        struct Case { int kvh; ScaleMode mode; std::uint64_t seed; };
        const Case cases[] = {{4, ScaleMode::kHead, 331},
                              {4, ScaleMode::kChannel, 332},
                              {2, ScaleMode::kHead, 333},
                              {2, ScaleMode::kChannel, 334},
                              {1, ScaleMode::kHead, 335},
                              {4, ScaleMode::kChannel, 336}};
        double worst = 0.0;
        for (const auto& c : cases) {
            ModelConfig cfg;
            cfg.n_layers = 2;
            cfg.n_heads = 4;
            cfg.n_kv_heads = c.kvh;
            cfg.d_head = 4;
            cfg.d_model = 16;
            cfg.d_ff = 24;
            cfg.vocab_size = 64;
            cfg.max_train_pos = 32;
            const auto w = random_weights<double>(cfg, c.seed);
            auto scales = random_scales<double>(cfg, c.mode, c.seed + 50);
            Rng rng(c.seed + 100);
            const auto tokens = random_prompt(rng, 12, 12, cfg.vocab_size);
            std::vector<int> targets(tokens.size(), 0);
            std::vector<std::uint8_t> mask(tokens.size(), 0);
            for (std::size_t t = 0; t + 1 < tokens.size(); ++t) {
                targets[t] = tokens[t + 1];
                mask[t] = t >= 6;
            }
            const auto scheme = PositionScheme::standard();
            const auto analytic = scale_gradients(tokens, targets, mask, w, scales, scheme);
            const auto fd = finite_diff_grad(
                [&](const std::vector<double>& v) {
                    auto s2 = scales;
                    s2.values = v;
                    return static_cast<double>(
                        cross_entropy_masked(forward(tokens, w, s2, scheme), targets, mask));
                },
                scales.values, 1e-5);
            for (std::size_t k = 0; k < scales.values.size(); ++k) {
                const double rel =
                    std::abs(analytic[k] - fd[k]) / std::max(std::abs(fd[k]), 1e-8);
                worst = std::max(worst, rel);
            }
        }
        record(3, desc, worst <= 1e-4,
               "6 configs (MHA+GQA, HEAD+CHANNEL), worst rel err " + fmt_double(worst) +
                   " (tol 1e-4)");
    } catch (const std::exception& e) {
        record(3, desc, false, std::string("exception: ") + e.what());
    }
}

// ---- criterion 4: direct-effect linearity ---------------------------------

template <typename T>
double linearity_worst(const Weights<T>& w, const ScaleSet<T>& s, int n_prompts,
                       std::uint64_t seed) {
    double worst = 0.0;
    for (int i = 0; i < n_prompts; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        const auto p = random_prompt(rng, 16, 24, w.cfg.vocab_size);
        const int pos = static_cast<int>(p.size()) - 1;
        const auto tr = forward_trace(p, w, s, PositionScheme::standard());
        const auto heads = head_contributions_at(tr, w, s, pos);
        for (int target : {3, 101, 444}) {
            const T* u = w.unembed.row(target);
            double total = 0.0;
            for (int k = 0; k < w.cfg.d_model; ++k)
                total += static_cast<double>(u[k]) *
                         static_cast<double>(w.embed.at(p[static_cast<std::size_t>(pos)], k));
            for (int l = 0; l < w.cfg.n_layers; ++l) {
                for (int h = 0; h < w.cfg.n_heads; ++h)
                    for (int k = 0; k < w.cfg.d_model; ++k)
                        total += static_cast<double>(u[k]) * static_cast<double>(heads.at(l, h, k));
                for (int k = 0; k < w.cfg.d_model; ++k)
                    total += static_cast<double>(u[k]) *
                             static_cast<double>(
                                 tr.layers[static_cast<std::size_t>(l)].mlp_res.at(pos, k));
            }
            double direct = 0.0;
            for (int k = 0; k < w.cfg.d_model; ++k)
                direct +=
                    static_cast<double>(u[k]) * static_cast<double>(tr.x_final.at(pos, k));
            worst = std::max(worst, std::abs(total - direct));
        }
    }
    return worst;
}

void criterion_4() {
    const std::string desc = "per-component direct effects sum to the unembedded residual";
    try {
        const auto w32 = random_weights<float>(toy_config(8), 341);
        const auto s32 = random_scales<float>(w32.cfg, ScaleMode::kChannel, 342);
        const double e32 = linearity_worst(w32, s32, 20, 343);
        const double e64 = linearity_worst(weights_cast<double>(w32), s32.cast<double>(), 20, 343);
        record(4, desc, e32 <= 1e-4 && e64 <= 1e-10,
               "20 prompts, worst |sum - direct| f32 " + fmt_double(e32) + " (tol 1e-4), f64 " +
                   fmt_double(e64) + " (tol 1e-10)");
    } catch (const std::exception& e) {
        record(4, desc, false, std::string("exception: ") + e.what());
    }
}

// ---- criterion 7: parameter counts ----------------------------------------

void criterion_7() {
    const std::string desc = "scale parameter counts for a 32x32 model";
    try {
        ModelConfig big;
        big.n_layers = 32;
        big.n_heads = 32;
        big.n_kv_heads = 32;
        big.d_head = 128;
        big.d_model = 32 * 128;
        const long h = count_params(big, ScaleMode::kHead);
        const long c = count_params(big, ScaleMode::kChannel);
        record(7, desc, h == 1024 && c == 131072,
               "HEAD " + fmt_int(h) + " (want 1024), CHANNEL " + fmt_int(c) + " (want 131072)");
    } catch (const std::exception& e) {
        record(7, desc, false, std::string("exception: ") + e.what());
    }
}

// ---- criterion 8: transferability metric ----------------------------------

void criterion_8() {
    const std::string desc = "transferability: zero on identity, affine-invariant, flat flagged";
    try {
        bool ok = true;
        std::string why = "T(identical)=0, affine invariance exact, flat baseline undefined";
        const std::vector<double> base{0.25, 0.375, 0.625, 0.5, 0.75};
        if (transferability(base, base).value != 0.0) { ok = false; why = "T != 0 on identical scores"; }

        const std::vector<double> tuned{0.5, 0.5, 0.75, 0.625, 0.875};
        const double t_raw = transferability(base, tuned).value;
        std::vector<double> base_t = base, tuned_t = tuned;
        for (auto& v : base_t) v = 2.0 * v + 0.25;   // exact in binary floating point
        for (auto& v : tuned_t) v = 2.0 * v + 0.25;
        if (transferability(base_t, tuned_t).value != t_raw) { ok = false; why = "affine invariance broke"; }

        const auto flat = transferability({0.5, 0.5, 0.5}, {0.6, 0.7, 0.8});
        if (flat.defined || !std::isnan(flat.value)) { ok = false; why = "flat baseline not flagged undefined"; }
        record(8, desc, ok, why);
    } catch (const std::exception& e) {
        record(8, desc, false, std::string("exception: ") + e.what());
    }
}

// ---- criteria 5 / 6 / 9: the trained toy model ----------------------------

struct Lab {
    Tokenizer tok;
    Weights<float> base;
    ScaleSet<float> sealh;
    ScaleSet<float> sealc;
    double base64 = 0.0, base512 = 0.0, sealh64 = 0.0, sealh512 = 0.0, sealc512 = 0.0;
};

std::vector<Sample> eval_set(const Tokenizer& tok, int len, int n, std::uint64_t seed) {
    TaskSpec spec;
    spec.kind = TaskKind::kLineRetrieval;
    spec.target_len = len;
    spec.pool = KeyPool::kEval;
    spec.seed = derive_seed(seed, static_cast<std::uint64_t>(len));
    return generate_dataset(tok, spec, n);
}

std::optional<Lab> criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string desc =
        "base model degrades at 512 and SEAL recovers it (50 samples, lr 1e-2, 1 epoch)";
    try {
        Lab lab{make_tokenizer(), zero_weights<float>(toy_config(8)), {}, {}};

        std::vector<Sample> corpus;
        for (std::size_t i = 0; i < std::size(kCorpusLens); ++i) {
            TaskSpec spec;
            spec.kind = TaskKind::kLineRetrieval;
            spec.target_len = kCorpusLens[i];
            for (const auto& [pool, seed_base] :
                 {std::pair{KeyPool::kTune, 400}, std::pair{KeyPool::kEval, 500}}) {
                spec.pool = pool;
                spec.seed = static_cast<std::uint64_t>(seed_base) + i;
                auto part = generate_dataset(lab.tok, spec, kCorpusNs[i] / 2);
                corpus.insert(corpus.end(), part.begin(), part.end());
            }
        }
        lab.base = random_weights<float>(toy_config(8), derive_seed(kBaseSeed, 0xBA5E));
        TrainHyper hy;
        hy.lr = kBaseLr;
        hy.epochs = kBaseEpochs;
        hy.seed = derive_seed(kBaseSeed, 0x5EED);
        const auto trep = train_base(lab.base, lab.tok, corpus, hy, PositionScheme::standard());
        std::cerr << "  trained " << trep.steps << " steps, loss " << trep.losses.front()
                  << " -> " << trep.losses.back() << " (" << fmt3(seconds_since(t0)) << "s)\n";

        const auto scheme = PositionScheme::standard();
        const auto ones = ScaleSet<float>::ones(lab.base.cfg, ScaleMode::kHead);
        const auto ev64 = eval_set(lab.tok, 64, kEvalN, 900);
        const auto ev512 = eval_set(lab.tok, 512, kEvalN, 900);
        lab.base64 = evaluate(lab.base, ones, scheme, lab.tok, ev64).mean;
        lab.base512 = evaluate(lab.base, ones, scheme, lab.tok, ev512).mean;
        std::cerr << "  base: len64 " << lab.base64 << ", len512 " << lab.base512 << "\n";

        TaskSpec tune_spec;
        tune_spec.kind = TaskKind::kLineRetrieval;
        tune_spec.target_len = kTuneLen;
        tune_spec.pool = KeyPool::kTune;
        tune_spec.seed = 777;
        const auto tune_data = generate_dataset(lab.tok, tune_spec, kTuneSamples);

        TuneConfig th;
        th.mode = ScaleMode::kHead;
        th.lr = kSealHLr;
        lab.sealh = tune_scales(lab.base, lab.tok, tune_data, th, scheme).scales;
        lab.sealh64 = evaluate(lab.base, lab.sealh, scheme, lab.tok, ev64).mean;
        lab.sealh512 = evaluate(lab.base, lab.sealh, scheme, lab.tok, ev512).mean;
        std::cerr << "  seal-h: len64 " << lab.sealh64 << ", len512 " << lab.sealh512 << "\n";

        TuneConfig tc;
        tc.mode = ScaleMode::kChannel;
        tc.lr = kSealCLr;
        lab.sealc = tune_scales(lab.base, lab.tok, tune_data, tc, scheme).scales;
        lab.sealc512 = evaluate(lab.base, lab.sealc, scheme, lab.tok, ev512).mean;
        std::cerr << "  seal-c: len512 " << lab.sealc512 << "\n";

        const double secs = seconds_since(t0);
        const bool pass = lab.base64 >= 0.90 && (lab.base64 - lab.base512) >= 0.20 &&
                          (lab.sealh512 - lab.base512) >= 0.15 &&
                          (lab.base64 - lab.sealh64) <= 0.05 && lab.sealc512 >= lab.sealh512 &&
                          secs < 1800.0;
        record(5, desc,
               pass,
               "base64 " + fmt3(lab.base64) + " (>=0.90), base512 " + fmt3(lab.base512) +
                   " (drop >=0.20), seal-h512 " + fmt3(lab.sealh512) + " (gain >=0.15), seal-h64 " +
                   fmt3(lab.sealh64) + " (drop <=0.05), seal-c512 " + fmt3(lab.sealc512) +
                   " (>= seal-h), " + fmt3(secs) + "s (<1800)");
        return lab;
    } catch (const std::exception& e) {
        record(5, desc, false, std::string("exception: ") + e.what());
        return std::nullopt;
    }
}

void criterion_6(const std::optional<Lab>& lab) {
    const std::string desc = "pruning sweep finds helpful and harmful heads; quadrant rescale helps";
    if (!lab) {
        record(6, desc, false, "skipped: criterion 5 pipeline unavailable");
        return;
    }
    try {
        const auto scheme = PositionScheme::standard();
        const auto ones = ScaleSet<float>::ones(lab->base.cfg, ScaleMode::kHead);
        const auto mid = eval_set(lab->tok, kSweepMid, kSweepN, 901);
        const auto lng = eval_set(lab->tok, kSweepLong, kSweepN, 901);
        const auto sweep = head_sweep(lab->base, ones, scheme, lab->tok, mid, lng);
        double best = -1.0, worst = 1.0;
        for (const auto& e : sweep.entries) {
            best = std::max(best, e.delta_long);
            worst = std::min(worst, e.delta_long);
        }
        const auto quad = quadrant_scale(sweep, lab->base.cfg, 0.9f, 1.1f);
        const double qlong = evaluate(lab->base, quad, scheme, lab->tok, lng).mean;
        const bool pass = best >= 0.02 && worst <= -0.02 && (qlong - sweep.baseline_long) >= 0.05;
        record(6, desc, pass,
               "delta-long max " + fmt3(best) + " (>=0.02), min " + fmt3(worst) +
                   " (<=-0.02), quadrant long " + fmt3(qlong) + " vs baseline " +
                   fmt3(sweep.baseline_long) + " (gain >=0.05)");
    } catch (const std::exception& e) {
        record(6, desc, false, std::string("exception: ") + e.what());
    }
}

void criterion_9(const std::optional<Lab>& lab) {
    const std::string desc = "training-free extension beats baseline at 2x context and keeps SEAL gains";
    if (!lab) {
        record(9, desc, false, "skipped: criterion 5 pipeline unavailable");
        return;
    }
    try {
        const long ntk_ctx = effective_context(ExtensionSpec::ntk(4.0, 4096));
        const long se_ctx = effective_context(ExtensionSpec::self_extend(6, 1024, 4096));
        bool ok = ntk_ctx == 16384 && se_ctx == 18432;
        std::string why = "effective context 16384/18432 exact";

        const auto& cfg = lab->base.cfg;
        const auto ones = ScaleSet<float>::ones(cfg, ScaleMode::kHead);
        const auto ntk = ExtensionSpec::ntk(4.0, cfg.max_train_pos).scheme();
        const auto se = ExtensionSpec::self_extend(6, cfg.max_train_pos / 4, cfg.max_train_pos).scheme();

        const auto ev512 = eval_set(lab->tok, 512, kEvalN, 900);
        const double ntk512 = evaluate(lab->base, ones, ntk, lab->tok, ev512).mean;
        const double se512 = evaluate(lab->base, ones, se, lab->tok, ev512).mean;
        std::cerr << "  512: base " << lab->base512 << ", ntk " << ntk512 << ", se " << se512
                  << "\n";
        if (!(lab->base512 <= 0.10)) { ok = false; why = "baseline at 512 above 0.10"; }
        if (!(ntk512 > lab->base512)) { ok = false; why = "NTK does not beat baseline at 512"; }
        if (!(se512 > lab->base512)) { ok = false; why = "Self-Extend does not beat baseline at 512"; }

        // SEAL on top of each extension: tuned under the extended scheme,
        // then compared against extension-only at every length.
        TaskSpec tune_spec;
        tune_spec.kind = TaskKind::kLineRetrieval;
        tune_spec.target_len = kTuneLen;
        tune_spec.pool = KeyPool::kTune;
        tune_spec.seed = 778;
        const auto tune_data = generate_dataset(lab->tok, tune_spec, kTuneSamples);
        TuneConfig th;
        th.mode = ScaleMode::kHead;
        th.lr = kSealHLr;

        std::string lens_detail;
        const std::pair<std::string, PositionScheme> exts[] = {{"ntk", ntk}, {"se", se}};
        for (const auto& [ext_name, scheme] : exts) {
            const auto ext_scales = tune_scales(lab->base, lab->tok, tune_data, th, scheme).scales;
            lens_detail += " " + ext_name + ":";
            for (int len : {64, 128, 256, 384, 512}) {
                const auto ev = eval_set(lab->tok, len, kEvalN, 900);
                const double ext_only = evaluate(lab->base, ones, scheme, lab->tok, ev).mean;
                const double ext_seal = evaluate(lab->base, ext_scales, scheme, lab->tok, ev).mean;
                lens_detail += " " + fmt_int(len) + ":" + fmt3(ext_only) + "/" + fmt3(ext_seal);
                if (ext_seal < ext_only - 0.05) {
                    ok = false;
                    why = ext_name + "+SEAL fell >0.05 below extension-only at length " +
                          fmt_int(len);
                }
            }
        }
        std::cerr << "  ext-only/ext+seal per length:" << lens_detail << "\n";

        record(9, desc, ok,
               ok ? "base512 " + fmt3(lab->base512) + " <=0.10, ntk512 " + fmt3(ntk512) +
                        ", se512 " + fmt3(se512) + "," + lens_detail + ", contexts 16384/18432"
                  : why);
    } catch (const std::exception& e) {
        record(9, desc, false, std::string("exception: ") + e.what());
    }
}

// ---- criterion 10: file-level determinism through the cli -----------------

int run_cmd(const std::string& cmd) {
    const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void criterion_10() {
    const std::string desc = "documented pipeline reruns are bit-identical, whatever --threads";
    try {
        const std::string bin = SEAL_LAB_BIN_PATH;
        const fs::path root = "/tmp/seal_acceptance_determinism";
        fs::remove_all(root);
        const std::vector<std::pair<std::string, int>> runs = {{"r1", 1}, {"r2", 1}, {"r3", 2}};
        for (const auto& [name, threads] : runs) {
            const fs::path d = root / name;
            fs::create_directories(d);
            const std::string cd = "cd " + d.string() + " && " + bin;
            if (run_cmd(cd + " gen-data --task line-retrieval --n 24 --len 48 --seed 5" +
                        " --pool tune --out train.jsonl") != 0)
                throw IoError("gen-data failed in " + name);
            if (run_cmd(cd + " train-base --data train.jsonl --layers 2 --heads 4 --kv-heads 2" +
                        " --d-head 8 --d-ff 48 --max-pos 64 --lr 1e-3 --seed 5 --out base.ckpt") != 0)
                throw IoError("train-base failed in " + name);
            if (run_cmd(cd + " tune --ckpt base.ckpt --data train.jsonl --mode seal-c" +
                        " --lr 1e-2 --out scales.json") != 0)
                throw IoError("tune failed in " + name);
            if (run_cmd(cd + " merge --ckpt base.ckpt --scales scales.json --verify --tol 1e-4" +
                        " --prompts 10 --out merged.ckpt") != 0)
                throw IoError("merge failed in " + name);
            if (run_cmd(cd + " eval --ckpt merged.ckpt --task line-retrieval --lengths 48,56" +
                        " --n 6 --seed 7 --threads " + fmt_int(threads) + " --out scores.csv") != 0)
                throw IoError("eval failed in " + name);
            if (run_cmd(cd + " sweep --ckpt base.ckpt --task line-retrieval --mid-len 48" +
                        " --long-len 56 --n 4 --seed 9 --threads " + fmt_int(threads) +
                        " --out sweep.csv") != 0)
                throw IoError("sweep failed in " + name);
        }
        bool ok = true;
        std::string why = "5-stage pipeline x3 runs: all artifacts byte-identical";
        const char* files[] = {"train.jsonl", "base.ckpt",  "scales.json",
                               "scales.json.losses.csv",    "merged.ckpt",
                               "scores.csv",  "sweep.csv",  "scores.csv.config"};
        for (const char* f : files) {
            const auto a = read_text_file((root / "r1" / f).string());
            if (a != read_text_file((root / "r2" / f).string())) {
                ok = false;
                why = std::string("rerun differs: ") + f;
            }
            if (a != read_text_file((root / "r3" / f).string())) {
                ok = false;
                why = std::string("--threads 2 differs: ") + f;
            }
        }
        record(10, desc, ok, why);
    } catch (const std::exception& e) {
        record(10, desc, false, std::string("exception: ") + e.what());
    }
}

}  // namespace

// Optional argv[1] is a comma list of criterion ids to run (bring-up aid);
// default runs everything.
int main(int argc, char** argv) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<bool> want(11, true);
    if (argc > 1) {
        want.assign(11, false);
        std::stringstream ss(argv[1]);
        std::string part;
        while (std::getline(ss, part, ',')) {
            const int id = std::stoi(part);
            if (id >= 1 && id <= 10) want[static_cast<std::size_t>(id)] = true;
        }
    }
    if (want[7]) criterion_7();
    if (want[8]) criterion_8();
    if (want[2]) criterion_2();
    if (want[3]) criterion_3();
    if (want[4]) criterion_4();
    if (want[1]) criterion_1();
    std::optional<Lab> lab;
    if (want[5]) lab = criterion_5();
    if (want[6]) criterion_6(lab);
    if (want[9]) criterion_9(lab);
    if (want[10]) criterion_10();

    std::sort(g_results.begin(), g_results.end(),
              [](const Criterion& a, const Criterion& b) { return a.id < b.id; });
    bool all = true;
    std::cout << "\n";
    for (const auto& r : g_results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.id << ": " << r.desc << " -- "
                  << r.detail << "\n";
        all = all && r.pass;
    }
    std::cout << (all ? "ACCEPTANCE: all criteria passed" : "ACCEPTANCE: FAILURES PRESENT")
              << " (" << fmt3(seconds_since(t0)) << "s total)\n";
    return all ? 0 : 1;
}
