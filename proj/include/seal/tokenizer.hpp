#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "seal/errors.hpp"

namespace seal {

// Closed vocabulary over a fixed word list. Every word appears twice, bare
// and with a leading space, so ordinary prose encodes one token per word.
// Digits are bare single-character pieces only, which forces numbers to
// encode one token per digit no matter what precedes them.

inline const std::vector<std::string>& adjectives() {
    static const std::vector<std::string> v = {
        "righteous", "verdant", "amber",  "brisk",  "calm",   "daring", "eager",  "fabled",
        "gentle",    "hollow",  "iron",   "jolly",  "keen",   "lucid",  "mellow", "noble",
        "opal",      "proud",   "quiet",  "rapid",  "silent", "tidy",   "urban",  "vivid",
        "wary",      "young",   "zesty",  "bold",   "crisp",  "dusty",  "early",  "frosty",
        "grand",     "humble",  "ivory",  "jagged", "kindly", "lively", "modest", "narrow",
    };
    return v;
}

inline const std::vector<std::string>& nouns() {
    static const std::vector<std::string> v = {
        "ethernet", "efficiency", "harbor", "meadow", "circuit", "lantern", "compass", "orchard",
        "valley",   "anchor",     "beacon", "canyon", "delta",   "engine",  "forest",  "garden",
        "hammer",   "island",     "jungle", "kernel", "ladder",  "magnet",  "needle",  "ocean",
        "prairie",  "quarry",     "river",  "summit", "tunnel",  "vessel",  "window",  "zephyr",
        "bridge",   "castle",     "desert", "ember",  "falcon",  "glacier", "harvest", "ingot",
    };
    return v;
}

inline const std::vector<std::string>& filler_words() {
    static const std::vector<std::string> v = {
        "the",  "a",     "an",   "and",  "or",   "of",    "to",   "on",   "at",   "by",
        "with", "from",  "into", "over", "under", "near", "far",  "some", "many", "few",
        "each", "every", "all",  "no",   "one",  "two",   "old",  "new",  "big",  "small",
        "long", "short", "warm", "cold", "bright", "dark", "soft", "loud", "green", "blue",
        "red",  "gray",  "slow", "fast", "high", "low",   "deep", "wide",
    };
    return v;
}

inline const std::vector<std::string>& task_words() {
    static const std::vector<std::string> v = {
        "line",  "REGISTER_CONTENT", "is",      "in",       "What",   "The",    "Which",
        "variables", "value",        "hold",    "holds",    "Answer", "X",      "words",
        "common",    "most",         "frequent", "appear",  "text",   "Find",   "list",
        "sits",      "rests",        "stands",  "waits",    "grass",  "story",  "note",
        "mark",      "fact",         "says",    "answer",   "question", "remember", "special",
        "magic",     "number",       "for",     "key",      "here",   "that",   "this",
        "are",       "often",
    };
    return v;
}

struct Tokenizer {
    struct PieceHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
    };
    struct PieceEq {
        using is_transparent = void;
        bool operator()(std::string_view a, std::string_view b) const { return a == b; }
    };

    std::vector<std::string> vocab;
    std::unordered_map<std::string, int, PieceHash, PieceEq> lookup;
    std::size_t max_piece = 0;
    int pad_id = 0;
    int bos_id = 1;
    int eos_id = 2;
    int ans_id = 3;

    int vocab_size() const { return static_cast<int>(vocab.size()); }

    // Greedy longest match. Unmatchable text is an error, never a silent
    // substitute token.
    std::vector<int> tokenize(std::string_view text) const {
        std::vector<int> ids;
        std::size_t pos = 0;
        while (pos < text.size()) {
            std::size_t take = std::min(max_piece, text.size() - pos);
            int id = -1;
            for (; take >= 1; --take) {
                auto it = lookup.find(text.substr(pos, take));
                if (it != lookup.end()) {
                    id = it->second;
                    break;
                }
            }
            if (id < 0)
                throw TokenError("unencodable text at byte " + std::to_string(pos) + ": \"" +
                                 std::string(text.substr(pos, std::min<std::size_t>(16, text.size() - pos))) +
                                 "\"");
            ids.push_back(id);
            pos += take;
        }
        return ids;
    }

    std::string detokenize(const std::vector<int>& ids) const {
        std::string out;
        for (int id : ids) {
            if (id < 0 || id >= vocab_size())
                throw TokenError("token id " + std::to_string(id) + " outside vocabulary");
            out += vocab[static_cast<std::size_t>(id)];
        }
        return out;
    }
};

inline Tokenizer make_tokenizer() {
    Tokenizer t;
    auto add = [&t](const std::string& piece) {
        if (!t.lookup.emplace(piece, t.vocab_size()).second)
            throw TokenError("duplicate vocabulary piece: \"" + piece + "\"");
        t.vocab.push_back(piece);
    };
    add("<pad>");
    add("<bos>");
    add("<eos>");
    add("<ans>");
    for (int d = 0; d < 10; ++d) add(std::string(1, static_cast<char>('0' + d)));
    for (const char* p : {"\n", " ", ":", "-", "<", ">", ".", ",", "?", "=", " <", " ="}) add(p);
    for (const auto* list : {&adjectives(), &nouns(), &filler_words(), &task_words()}) {
        for (const std::string& w : *list) {
            add(w);
            add(" " + w);
        }
    }
    int reserve = 0;
    while (t.vocab_size() < 512) add("<reserved_" + std::to_string(reserve++) + ">");
    if (t.vocab_size() != 512) throw TokenError("vocabulary exceeds 512 pieces");
    for (const std::string& p : t.vocab) t.max_piece = std::max(t.max_piece, p.size());
    return t;
}

}  // namespace seal
