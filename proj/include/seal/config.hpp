#pragma once

#include <string>

#include "seal/errors.hpp"

namespace seal {

// Decoder-only transformer hyperparameters. The defaults are the desk-scale
// configuration every experiment in this repo uses unless overridden.
struct ModelConfig {
    int n_layers = 4;
    int n_heads = 8;
    int n_kv_heads = 8;   // == n_heads for MHA, a divisor of it for GQA
    int d_model = 128;
    int d_head = 16;
    int d_ff = 256;
    int vocab_size = 512;
    int max_train_pos = 256;
    double rope_theta = 10000.0;

    // Sequences past this are rejected outright to bound memory.
    int hard_cap() const { return 8 * max_train_pos; }

    int group_width() const { return n_heads / n_kv_heads; }

    void validate() const {
        if (n_layers <= 0 || n_heads <= 0 || n_kv_heads <= 0 || d_model <= 0 ||
            d_head <= 0 || d_ff <= 0 || vocab_size <= 0 || max_train_pos <= 0)
            throw ShapeError("model config fields must be positive");
        if (n_heads % n_kv_heads != 0)
            throw ShapeError("n_heads must be a multiple of n_kv_heads");
        if (d_model != n_heads * d_head)
            throw ShapeError("d_model must equal n_heads * d_head");
        if (d_head % 2 != 0)
            throw ShapeError("d_head must be even for rotary embedding");
        if (!(rope_theta > 1.0))
            throw ShapeError("rope_theta must exceed 1");
    }
};

// How positions enter attention. STANDARD is plain RoPE; NTK enlarges the
// rotary base; SELF_EXTEND maps distant relative positions into groups while
// keeping a neighbor window exact.
struct PositionScheme {
    enum class Kind { kStandard, kNtk, kSelfExtend };

    Kind kind = Kind::kStandard;
    double ntk_factor = 1.0;
    int group_size = 1;
    int neighbor_window = 0;

    static PositionScheme standard() { return {}; }

    static PositionScheme ntk(double factor) {
        if (factor < 1.0) throw ShapeError("ntk factor must be >= 1");
        PositionScheme s;
        s.kind = Kind::kNtk;
        s.ntk_factor = factor;
        return s;
    }

    static PositionScheme self_extend(int group_size, int neighbor_window) {
        if (group_size < 1) throw ShapeError("self-extend group size must be >= 1");
        if (neighbor_window < 0) throw ShapeError("self-extend neighbor window must be >= 0");
        PositionScheme s;
        s.kind = Kind::kSelfExtend;
        s.group_size = group_size;
        s.neighbor_window = neighbor_window;
        return s;
    }

    std::string name() const {
        switch (kind) {
            case Kind::kStandard: return "standard";
            case Kind::kNtk: return "ntk";
            case Kind::kSelfExtend: return "self-extend";
        }
        return "?";
    }
};

} // namespace seal
