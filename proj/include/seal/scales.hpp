#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "seal/config.hpp"
#include "seal/errors.hpp"

namespace seal {

enum class ScaleMode { kHead, kChannel };

inline const char* scale_mode_name(ScaleMode m) {
    return m == ScaleMode::kHead ? "HEAD" : "CHANNEL";
}

inline ScaleMode scale_mode_from_name(const std::string& s) {
    if (s == "HEAD") return ScaleMode::kHead;
    if (s == "CHANNEL") return ScaleMode::kChannel;
    throw IoError("unknown scale mode: " + s);
}

// Number of learnable scale parameters for a model.
inline long count_params(const ModelConfig& cfg, ScaleMode mode) {
    const long lh = static_cast<long>(cfg.n_layers) * cfg.n_heads;
    return mode == ScaleMode::kHead ? lh : lh * cfg.d_head;
}

// Learnable attention scales: one scalar per head (HEAD) or one scalar per
// head channel (CHANNEL), flattened layer-major. Initialized to 1, which is
// the exact identity on the model.
template <typename T>
struct ScaleSet {
    ScaleMode mode = ScaleMode::kHead;
    int n_layers = 0, n_heads = 0, d_head = 0;
    std::vector<T> values;

    static ScaleSet ones(const ModelConfig& cfg, ScaleMode mode) {
        ScaleSet s;
        s.mode = mode;
        s.n_layers = cfg.n_layers;
        s.n_heads = cfg.n_heads;
        s.d_head = cfg.d_head;
        s.values.assign(static_cast<std::size_t>(count_params(cfg, mode)), T(1));
        return s;
    }

    std::size_t index(int l, int h, int c = 0) const {
        const std::size_t lh = static_cast<std::size_t>(l) * n_heads + h;
        return mode == ScaleMode::kHead ? lh : lh * d_head + c;
    }

    // Scale applied to channel c of head (l, h)'s output.
    T value(int l, int h, int c) const { return values[index(l, h, c)]; }

    T& head_ref(int l, int h) { return values[index(l, h)]; }
    T& channel_ref(int l, int h, int c) { return values[index(l, h, c)]; }

    void check_model(const ModelConfig& cfg) const {
        if (n_layers != cfg.n_layers || n_heads != cfg.n_heads || d_head != cfg.d_head)
            throw ShapeError("scale set does not match model config");
        if (values.size() != static_cast<std::size_t>(count_params(cfg, mode)))
            throw ShapeError("scale set value count does not match its mode");
    }

    template <typename To>
    ScaleSet<To> cast() const {
        ScaleSet<To> out;
        out.mode = mode;
        out.n_layers = n_layers;
        out.n_heads = n_heads;
        out.d_head = d_head;
        out.values.assign(values.size(), To(0));
        for (std::size_t i = 0; i < values.size(); ++i) out.values[i] = static_cast<To>(values[i]);
        return out;
    }

    // HEAD sets embed exactly into CHANNEL space (constant per-head vectors).
    ScaleSet to_channel() const {
        if (mode == ScaleMode::kChannel) return *this;
        ScaleSet out = *this;
        out.mode = ScaleMode::kChannel;
        out.values.assign(values.size() * static_cast<std::size_t>(d_head), T(1));
        for (int l = 0; l < n_layers; ++l)
            for (int h = 0; h < n_heads; ++h)
                for (int c = 0; c < d_head; ++c)
                    out.values[out.index(l, h, c)] = value(l, h, 0);
        return out;
    }
};

template <typename T>
nlohmann::json scales_to_json(const ScaleSet<T>& s) {
    nlohmann::json values;
    if (s.mode == ScaleMode::kHead) {
        for (int l = 0; l < s.n_layers; ++l) {
            nlohmann::json row = nlohmann::json::array();
            for (int h = 0; h < s.n_heads; ++h) row.push_back(s.value(l, h, 0));
            values.push_back(row);
        }
    } else {
        for (int l = 0; l < s.n_layers; ++l) {
            nlohmann::json layer = nlohmann::json::array();
            for (int h = 0; h < s.n_heads; ++h) {
                nlohmann::json row = nlohmann::json::array();
                for (int c = 0; c < s.d_head; ++c) row.push_back(s.value(l, h, c));
                layer.push_back(row);
            }
            values.push_back(layer);
        }
    }
    return nlohmann::json{{"mode", scale_mode_name(s.mode)},
                          {"config", {{"L", s.n_layers}, {"H", s.n_heads}, {"d_head", s.d_head}}},
                          {"values", values}};
}

template <typename T>
ScaleSet<T> scales_from_json(const nlohmann::json& j) {
    ScaleSet<T> s;
    try {
        s.mode = scale_mode_from_name(j.at("mode").get<std::string>());
        const auto& cfg = j.at("config");
        s.n_layers = cfg.at("L").get<int>();
        s.n_heads = cfg.at("H").get<int>();
        s.d_head = cfg.at("d_head").get<int>();
        const auto& values = j.at("values");
        if (static_cast<int>(values.size()) != s.n_layers)
            throw IoError("scale file layer count mismatch");
        for (int l = 0; l < s.n_layers; ++l) {
            const auto& layer = values.at(l);
            if (static_cast<int>(layer.size()) != s.n_heads)
                throw IoError("scale file head count mismatch");
            for (int h = 0; h < s.n_heads; ++h) {
                if (s.mode == ScaleMode::kHead) {
                    s.values.push_back(layer.at(h).get<T>());
                } else {
                    const auto& row = layer.at(h);
                    if (static_cast<int>(row.size()) != s.d_head)
                        throw IoError("scale file channel count mismatch");
                    for (int c = 0; c < s.d_head; ++c)
                        s.values.push_back(row.at(c).get<T>());
                }
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed scale file: ") + e.what());
    }
    return s;
}

template <typename T>
void save_scales(const ScaleSet<T>& s, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open scale file for writing: " + path);
    f << scales_to_json(s).dump(2) << "\n";
    if (!f) throw IoError("failed writing scale file: " + path);
}

template <typename T>
ScaleSet<T> load_scales(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open scale file: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed scale file ") + path + ": " + e.what());
    }
    return scales_from_json<T>(j);
}

} // namespace seal
