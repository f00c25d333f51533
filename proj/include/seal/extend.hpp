#pragma once

#include <cmath>

#include "seal/config.hpp"
#include "seal/errors.hpp"

namespace seal {

// Training-free context extension settings, resolvable to a PositionScheme.
struct ExtensionSpec {
    enum class Method { kNone, kNtk, kSelfExtend };

    Method method = Method::kNone;
    double ntk_factor = 1.0;
    int group_size = 1;
    int neighbor_window = 0;
    int base_context = 0;

    static ExtensionSpec none(int base_context) {
        ExtensionSpec s;
        s.base_context = base_context;
        return s;
    }

    static ExtensionSpec ntk(double factor, int base_context) {
        if (factor < 1.0) throw ShapeError("ntk factor must be >= 1");
        ExtensionSpec s;
        s.method = Method::kNtk;
        s.ntk_factor = factor;
        s.base_context = base_context;
        return s;
    }

    static ExtensionSpec self_extend(int group_size, int neighbor_window, int base_context) {
        if (group_size < 1) throw ShapeError("self-extend group size must be >= 1");
        if (neighbor_window < 0 || neighbor_window >= base_context)
            throw ShapeError("self-extend neighbor window must lie in [0, base context)");
        ExtensionSpec s;
        s.method = Method::kSelfExtend;
        s.group_size = group_size;
        s.neighbor_window = neighbor_window;
        s.base_context = base_context;
        return s;
    }

    PositionScheme scheme() const {
        switch (method) {
            case Method::kNone: return PositionScheme::standard();
            case Method::kNtk: return PositionScheme::ntk(ntk_factor);
            case Method::kSelfExtend:
                return PositionScheme::self_extend(group_size, neighbor_window);
        }
        return PositionScheme::standard();
    }
};

// Context reachable without leaving the trained relative-position range:
// NTK stretches the base window by its factor; Self-Extend covers
// (base - neighbor) * group beyond-window tokens plus the window itself
// folded into the grouped positions.
inline long effective_context(const ExtensionSpec& spec) {
    switch (spec.method) {
        case ExtensionSpec::Method::kNone:
            return spec.base_context;
        case ExtensionSpec::Method::kNtk:
            return static_cast<long>(spec.base_context * spec.ntk_factor);
        case ExtensionSpec::Method::kSelfExtend:
            return static_cast<long>(spec.base_context - spec.neighbor_window) *
                   spec.group_size;
    }
    return spec.base_context;
}

// NTK-aware base adjustment: theta' = theta * factor^(d_head / (d_head - 2)).
// The exponent slightly overshoots the factor so the lowest frequency band
// stretches by the full factor.
inline double ntk_adjust(double rope_theta, double factor, int d_head) {
    if (factor < 1.0) throw ShapeError("ntk factor must be >= 1");
    if (d_head < 4 || d_head % 2 != 0) throw ShapeError("ntk_adjust requires even d_head >= 4");
    const double exponent = static_cast<double>(d_head) / (d_head - 2);
    return rope_theta * std::pow(factor, exponent);
}

// Self-Extend's piecewise map on relative distances: exact inside the
// neighbor window, grouped beyond it.
inline int self_extend_map(int rel, int group_size, int neighbor_window) {
    if (rel <= neighbor_window) return rel;
    return neighbor_window + (rel - neighbor_window) / group_size;
}

// Effective relative position for a (query, key) pair. Rejects non-causal
// pairs; everything downstream assumes q >= k.
inline int self_extend_positions(int query_pos, int key_pos, int group_size,
                                 int neighbor_window) {
    if (query_pos < key_pos) throw LengthError("self_extend_positions: non-causal pair");
    return self_extend_map(query_pos - key_pos, group_size, neighbor_window);
}

// Relative distance as seen by the rotary tables under a given scheme.
inline int scheme_relative(const PositionScheme& s, int rel) {
    if (s.kind == PositionScheme::Kind::kSelfExtend)
        return self_extend_map(rel, s.group_size, s.neighbor_window);
    return rel;
}

// Rotary base actually used by attention under a given scheme.
inline double scheme_theta(const PositionScheme& s, double rope_theta, int d_head) {
    if (s.kind == PositionScheme::Kind::kNtk)
        return ntk_adjust(rope_theta, s.ntk_factor, d_head);
    return rope_theta;
}

} // namespace seal
