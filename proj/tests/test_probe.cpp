#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "seal/probe.hpp"

using namespace seal;

namespace {

ModelConfig tiny_config(int kvh) {
    ModelConfig cfg;
    cfg.n_layers = 2;
    cfg.n_heads = 4;
    cfg.n_kv_heads = kvh;
    cfg.d_head = 8;
    cfg.d_model = 32;
    cfg.d_ff = 48;
    cfg.vocab_size = 512;  // tokenizer-compatible
    cfg.max_train_pos = 64;
    return cfg;
}

std::vector<int> random_prompt(Rng& rng, int len, int vocab) {
    std::vector<int> t(static_cast<std::size_t>(len));
    for (auto& v : t) v = uniform_int(rng, vocab);
    return t;
}

std::vector<Sample> small_eval_set(const Tokenizer& tok, int len, std::uint64_t seed, int n) {
    TaskSpec spec;
    spec.kind = TaskKind::kLineRetrieval;
    spec.target_len = len;
    spec.seed = seed;
    return generate_dataset(tok, spec, n);
}

}  // namespace

TEST_CASE("pruning a head equals forwarding with its scale at zero") {
    const ModelConfig cfg = tiny_config(4);
    const auto w = random_weights<float>(cfg, 5);
    Rng rng(6);
    const auto prompt = random_prompt(rng, 24, cfg.vocab_size);

    const auto ones_h = ScaleSet<float>::ones(cfg, ScaleMode::kHead);
    const auto pruned_h = prune_head(ones_h, 1, 2);
    const auto pruned_c = prune_head(ScaleSet<float>::ones(cfg, ScaleMode::kChannel), 1, 2);

    auto manual = ScaleSet<float>::ones(cfg, ScaleMode::kHead);
    manual.head_ref(1, 2) = 0.0f;

    const auto a = forward(prompt, w, pruned_h, PositionScheme::standard());
    const auto b = forward(prompt, w, manual, PositionScheme::standard());
    const auto c = forward(prompt, w, pruned_c, PositionScheme::standard());
    REQUIRE(a.data == b.data);
    REQUIRE(a.data == c.data);  // HEAD zero == CHANNEL zero, exactly
}

TEST_CASE("pruning every head leaves the attention-free network") {
    const ModelConfig cfg = tiny_config(2);
    const auto w = random_weights<float>(cfg, 7);
    Rng rng(8);
    const auto prompt = random_prompt(rng, 16, cfg.vocab_size);

    auto s = ScaleSet<float>::ones(cfg, ScaleMode::kHead);
    for (int l = 0; l < cfg.n_layers; ++l)
        for (int h = 0; h < cfg.n_heads; ++h) s = prune_head(s, l, h);

    auto zeros = ScaleSet<float>::ones(cfg, ScaleMode::kHead);
    for (auto& v : zeros.values) v = 0.0f;

    const auto a = forward(prompt, w, s, PositionScheme::standard());
    const auto b = forward(prompt, w, zeros, PositionScheme::standard());
    REQUIRE(a.data == b.data);
}

TEST_CASE("prune indices are validated") {
    const ModelConfig cfg = tiny_config(4);
    const auto s = ScaleSet<float>::ones(cfg, ScaleMode::kHead);
    REQUIRE_THROWS_AS(prune_head(s, -1, 0), ShapeError);
    REQUIRE_THROWS_AS(prune_head(s, 0, 4), ShapeError);
    REQUIRE_THROWS_AS(prune_channel(s, 0, 0, 8), ShapeError);
}

TEST_CASE("head sweep covers the grid and ignores execution order") {
    const ModelConfig cfg = tiny_config(4);
    const auto w = random_weights<float>(cfg, 11);
    const Tokenizer tok = make_tokenizer();
    const auto scales = ScaleSet<float>::ones(cfg, ScaleMode::kHead);
    const auto mid = small_eval_set(tok, 48, 21, 3);
    const auto lng = small_eval_set(tok, 60, 22, 3);

    const auto r1 = head_sweep(w, scales, PositionScheme::standard(), tok, mid, lng, 1);
    REQUIRE(r1.entries.size() == static_cast<std::size_t>(cfg.n_layers * cfg.n_heads));
    for (int l = 0; l < cfg.n_layers; ++l)
        for (int h = 0; h < cfg.n_heads; ++h) {
            const auto& e = r1.entries[static_cast<std::size_t>(l * cfg.n_heads + h)];
            REQUIRE(e.layer == l);
            REQUIRE(e.head == h);
            REQUIRE(e.delta_mid == e.score_mid - r1.baseline_mid);
        }

    const auto r3 = head_sweep(w, scales, PositionScheme::standard(), tok, mid, lng, 3);
    REQUIRE(r1.baseline_mid == r3.baseline_mid);
    REQUIRE(r1.baseline_long == r3.baseline_long);
    for (std::size_t i = 0; i < r1.entries.size(); ++i) {
        REQUIRE(r1.entries[i].score_mid == r3.entries[i].score_mid);
        REQUIRE(r1.entries[i].score_long == r3.entries[i].score_long);
    }
}

TEST_CASE("a head with no value path sweeps to exactly zero delta") {
    const ModelConfig cfg = tiny_config(4);  // MHA so the head owns its v slice
    auto w = random_weights<float>(cfg, 13);
    const int l = 0, h = 1;
    for (int i = 0; i < cfg.d_model; ++i)
        for (int c = 0; c < cfg.d_head; ++c)
            w.layers[0].wv.at(i, h * cfg.d_head + c) = 0.0f;

    const Tokenizer tok = make_tokenizer();
    const auto scales = ScaleSet<float>::ones(cfg, ScaleMode::kHead);
    const auto mid = small_eval_set(tok, 48, 31, 2);
    const auto lng = small_eval_set(tok, 60, 32, 2);
    const auto r = head_sweep(w, scales, PositionScheme::standard(), tok, mid, lng, 1);
    const auto& e = r.entries[static_cast<std::size_t>(l * cfg.n_heads + h)];
    REQUIRE(e.delta_mid == 0.0);
    REQUIRE(e.delta_long == 0.0);
}

TEST_CASE("channel sweep has d_head entries and zeroing all channels prunes the head") {
    const ModelConfig cfg = tiny_config(4);
    const auto w = random_weights<float>(cfg, 17);
    const Tokenizer tok = make_tokenizer();
    const auto scales = ScaleSet<float>::ones(cfg, ScaleMode::kChannel);
    const auto lng = small_eval_set(tok, 48, 41, 2);

    const auto r = channel_sweep(w, scales, PositionScheme::standard(), tok, 1, 3, lng, 2);
    REQUIRE(r.score_long.size() == static_cast<std::size_t>(cfg.d_head));
    REQUIRE(r.delta_long.size() == static_cast<std::size_t>(cfg.d_head));

    auto all_zero = scales;
    for (int c = 0; c < cfg.d_head; ++c) all_zero.channel_ref(1, 3, c) = 0.0f;
    const auto via_prune = evaluate(w, prune_head(scales, 1, 3), PositionScheme::standard(), tok, lng).mean;
    const auto via_zero = evaluate(w, all_zero, PositionScheme::standard(), tok, lng).mean;
    REQUIRE(via_prune == via_zero);
}

TEST_CASE("quadrant scaling maps sweep signs to factors") {
    const ModelConfig cfg = tiny_config(4);
    SweepResult sweep;
    sweep.n_layers = cfg.n_layers;
    sweep.n_heads = cfg.n_heads;
    sweep.entries.assign(8, SweepEntry{});
    for (int i = 0; i < 8; ++i) {
        sweep.entries[static_cast<std::size_t>(i)].layer = i / 4;
        sweep.entries[static_cast<std::size_t>(i)].head = i % 4;
    }
    sweep.entries[0].delta_mid = 0.05;
    sweep.entries[0].delta_long = 0.08;  // Q1
    sweep.entries[1].delta_mid = -0.05;
    sweep.entries[1].delta_long = -0.08;  // Q3
    sweep.entries[2].delta_mid = 0.0;
    sweep.entries[2].delta_long = 0.08;  // axis
    sweep.entries[3].delta_mid = 0.05;
    sweep.entries[3].delta_long = -0.08;  // Q4

    auto s = quadrant_scale<float>(sweep, cfg);
    REQUIRE(s.value(0, 0, 0) == 0.9f);
    REQUIRE(s.value(0, 1, 0) == 1.1f);
    REQUIRE(s.value(0, 2, 0) == 1.0f);
    REQUIRE(s.value(0, 3, 0) == 1.0f);
    for (int h = 0; h < 4; ++h) REQUIRE(s.value(1, h, 0) == 1.0f);

    auto id = quadrant_scale<float>(sweep, cfg, 1.0f, 1.0f);
    REQUIRE(id.values == ScaleSet<float>::ones(cfg, ScaleMode::kHead).values);

    REQUIRE_THROWS_AS(quadrant_scale<float>(sweep, cfg, 0.0f, 1.1f), ShapeError);
}
