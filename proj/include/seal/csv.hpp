#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "seal/errors.hpp"
#include "seal/hash.hpp"
#include "seal/probe.hpp"
#include "seal/version.hpp"

namespace seal {

// Shortest round-trip decimal form, identical across runs and locales.
inline std::string fmt_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string fmt_int(long v) {
    char buf[24];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Comment line stamped at the top of every generated artifact so a file can
// be traced back to the run that produced it.
inline std::string run_stamp(std::uint64_t seed, const std::string& resolved_config) {
    char hex[17];
    const auto res = std::to_chars(hex, hex + sizeof(hex), fnv1a(resolved_config), 16);
    return "# seal-lab " + std::string(kVersion) + " seed=" + fmt_int(static_cast<long>(seed)) +
           " config=" + std::string(hex, res.ptr);
}

struct CsvWriter {
    std::string text;

    void comment(const std::string& line) { text += line + "\n"; }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) text += ",";
            text += cells[i];
        }
        text += "\n";
    }
};

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open file for writing: " + path);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw IoError("failed writing file: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open file: " + path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return text;
}

inline std::string sweep_csv(const SweepResult& r, const std::string& stamp) {
    CsvWriter w;
    w.comment(stamp);
    w.row({"layer", "head", "score_mid", "score_long", "delta_mid", "delta_long",
           "baseline_mid", "baseline_long"});
    for (const auto& e : r.entries)
        w.row({fmt_int(e.layer), fmt_int(e.head), fmt_double(e.score_mid),
               fmt_double(e.score_long), fmt_double(e.delta_mid), fmt_double(e.delta_long),
               fmt_double(r.baseline_mid), fmt_double(r.baseline_long)});
    return w.text;
}

inline std::string channel_sweep_csv(const ChannelSweepResult& r, const std::string& stamp) {
    CsvWriter w;
    w.comment(stamp);
    w.row({"layer", "head", "channel", "score_long", "delta_long", "baseline_long"});
    for (std::size_t c = 0; c < r.score_long.size(); ++c)
        w.row({fmt_int(r.layer), fmt_int(r.head), fmt_int(static_cast<long>(c)),
               fmt_double(r.score_long[c]), fmt_double(r.delta_long[c]),
               fmt_double(r.baseline_long)});
    return w.text;
}

} // namespace seal
