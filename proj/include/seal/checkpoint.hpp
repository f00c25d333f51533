#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "seal/errors.hpp"
#include "seal/model.hpp"

namespace seal {

// Checkpoint container: 8-byte magic, little-endian u64 header length, a JSON
// header (config, caller metadata, tensor directory), then raw f32 payload in
// the canonical tensor order. Offsets are relative to the payload start.
// Little-endian hosts only, which is everything this lab runs on.
inline constexpr char kCheckpointMagic[8] = {'S', 'E', 'A', 'L', 'C', 'K', 'P', '1'};

inline nlohmann::json config_to_json(const ModelConfig& cfg) {
    return {{"n_layers", cfg.n_layers},   {"n_heads", cfg.n_heads},
            {"n_kv_heads", cfg.n_kv_heads}, {"d_model", cfg.d_model},
            {"d_head", cfg.d_head},       {"d_ff", cfg.d_ff},
            {"vocab_size", cfg.vocab_size}, {"max_train_pos", cfg.max_train_pos},
            {"rope_theta", cfg.rope_theta}};
}

inline ModelConfig config_from_json(const nlohmann::json& j) {
    ModelConfig cfg;
    try {
        cfg.n_layers = j.at("n_layers").get<int>();
        cfg.n_heads = j.at("n_heads").get<int>();
        cfg.n_kv_heads = j.at("n_kv_heads").get<int>();
        cfg.d_model = j.at("d_model").get<int>();
        cfg.d_head = j.at("d_head").get<int>();
        cfg.d_ff = j.at("d_ff").get<int>();
        cfg.vocab_size = j.at("vocab_size").get<int>();
        cfg.max_train_pos = j.at("max_train_pos").get<int>();
        cfg.rope_theta = j.at("rope_theta").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed model config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

inline void save_checkpoint(const Weights<float>& w, const std::string& path,
                            const nlohmann::json& meta = nlohmann::json::object()) {
    nlohmann::json tensors = nlohmann::json::array();
    std::uint64_t offset = 0;
    w.for_each_tensor([&](const std::string& name, const Tensor<float>& t) {
        nlohmann::json entry = {{"name", name}, {"dtype", "f32"}, {"offset", offset}};
        entry["shape"] = t.shape;
        tensors.push_back(entry);
        offset += t.data.size() * sizeof(float);
    });
    const nlohmann::json header = {{"format", "SEALCKP1"},
                                   {"version", 1},
                                   {"config", config_to_json(w.cfg)},
                                   {"meta", meta},
                                   {"tensors", tensors}};
    const std::string hdr = header.dump();

    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open checkpoint for writing: " + path);
    f.write(kCheckpointMagic, sizeof(kCheckpointMagic));
    const std::uint64_t hlen = hdr.size();
    f.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
    f.write(hdr.data(), static_cast<std::streamsize>(hdr.size()));
    w.for_each_tensor([&](const std::string&, const Tensor<float>& t) {
        f.write(reinterpret_cast<const char*>(t.data.data()),
                static_cast<std::streamsize>(t.data.size() * sizeof(float)));
    });
    if (!f) throw IoError("failed writing checkpoint: " + path);
}

struct Checkpoint {
    Weights<float> weights;
    nlohmann::json meta;
};

inline Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open checkpoint: " + path);

    char magic[sizeof(kCheckpointMagic)];
    f.read(magic, sizeof(magic));
    if (!f || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
        throw IoError("not a checkpoint file: " + path);
    std::uint64_t hlen = 0;
    f.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
    if (!f || hlen == 0 || hlen > (1u << 20)) throw IoError("corrupt checkpoint header: " + path);
    std::string hdr(hlen, '\0');
    f.read(hdr.data(), static_cast<std::streamsize>(hlen));
    if (!f) throw IoError("truncated checkpoint header: " + path);

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(hdr);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed checkpoint header: ") + e.what());
    }
    if (header.value("format", "") != "SEALCKP1" || header.value("version", 0) != 1)
        throw IoError("unsupported checkpoint format: " + path);

    Checkpoint ckpt;
    ckpt.weights = zero_weights<float>(config_from_json(header.at("config")));
    ckpt.meta = header.value("meta", nlohmann::json::object());

    const auto& tensors = header.at("tensors");
    std::size_t idx = 0;
    std::uint64_t offset = 0;
    ckpt.weights.for_each_tensor([&](const std::string& name, Tensor<float>& t) {
        if (idx >= tensors.size()) throw IoError("checkpoint tensor directory too short: " + path);
        const auto& entry = tensors.at(idx++);
        if (entry.at("name").get<std::string>() != name)
            throw IoError("checkpoint tensor order mismatch at " + name);
        if (entry.at("dtype").get<std::string>() != "f32")
            throw IoError("unsupported tensor dtype in " + name + ": only f32 checkpoints load");
        if (entry.at("shape").get<std::vector<int>>() != t.shape)
            throw IoError("checkpoint shape mismatch at " + name);
        if (entry.at("offset").get<std::uint64_t>() != offset)
            throw IoError("checkpoint offset mismatch at " + name);
        f.read(reinterpret_cast<char*>(t.data.data()),
               static_cast<std::streamsize>(t.data.size() * sizeof(float)));
        if (!f) throw IoError("truncated checkpoint payload at " + name);
        offset += t.data.size() * sizeof(float);
    });
    if (idx != tensors.size()) throw IoError("checkpoint has extra tensors: " + path);
    return ckpt;
}

} // namespace seal
