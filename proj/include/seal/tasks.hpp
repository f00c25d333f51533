#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "seal/errors.hpp"
#include "seal/hash.hpp"
#include "seal/rng.hpp"
#include "seal/tokenizer.hpp"
#include "seal/version.hpp"

namespace seal {

enum class TaskKind { kLineRetrieval, kNiah, kCwe, kFwe, kVt };

inline const char* task_name(TaskKind k) {
    switch (k) {
        case TaskKind::kLineRetrieval: return "line-retrieval";
        case TaskKind::kNiah: return "niah";
        case TaskKind::kCwe: return "cwe";
        case TaskKind::kFwe: return "fwe";
        case TaskKind::kVt: return "vt";
    }
    throw GenerationError("bad task kind");
}

inline TaskKind task_from_name(const std::string& s) {
    if (s == "line-retrieval") return TaskKind::kLineRetrieval;
    if (s == "niah") return TaskKind::kNiah;
    if (s == "cwe") return TaskKind::kCwe;
    if (s == "fwe") return TaskKind::kFwe;
    if (s == "vt") return TaskKind::kVt;
    throw GenerationError("unknown task kind: " + s);
}

// Tuning and evaluation draw from disjoint halves of every content pool so a
// tuned model can never have seen an evaluation key or answer.
enum class KeyPool { kTune, kEval };

inline const char* pool_name(KeyPool p) { return p == KeyPool::kTune ? "tune" : "eval"; }
inline KeyPool pool_from_name(const std::string& s) {
    if (s == "tune") return KeyPool::kTune;
    if (s == "eval") return KeyPool::kEval;
    throw GenerationError("unknown pool: " + s);
}

struct TaskSpec {
    TaskKind kind = TaskKind::kLineRetrieval;
    int target_len = 256;
    std::uint64_t seed = 1;
    KeyPool pool = KeyPool::kEval;
    int value_digits = 5;
    // line retrieval: fraction of samples whose target line is forced into
    // the last 30% of lines (models length-skewed training data)
    double target_late = 0.0;
    // line retrieval: extra solved question/answer pairs appended before the
    // final question (training-density knob; the sample's own answer is the
    // last pair and scoring is unchanged)
    int n_queries = 1;
    // niah
    double needle_depth = -1.0;  // <0 draws the depth per sample
    int needle_words = 8;
    // cwe / fwe
    int n_common = 4;
    int n_frequent = 3;
    // vt
    int n_chains = 3;
    int chain_len = 4;
};

struct Sample {
    TaskKind kind = TaskKind::kLineRetrieval;
    std::vector<int> prompt_tokens;
    std::vector<int> answer_tokens;
    std::string prompt;
    std::string answer;
    std::string key;
    std::string value;
    int insert_pos = 0;
    int gen_len = 0;
};

// line-retrieval text templates
inline std::string line_text(const std::string& key, const std::string& value) {
    return "line " + key + ": REGISTER_CONTENT is <" + value + ">\n";
}
inline std::string question_text(const std::string& key) {
    return "What is the <REGISTER_CONTENT> in line " + key + "?";
}
inline std::string answer_text(const std::string& key, const std::string& value) {
    return "The <REGISTER_CONTENT> in line " + key + " is " + value + ".";
}

// adjective-noun keys, split into tune/eval halves by name hash parity
inline const std::vector<std::string>& line_keys(KeyPool pool) {
    static const auto build = [](int parity) {
        std::vector<std::string> out;
        for (const auto& a : adjectives())
            for (const auto& n : nouns()) {
                std::string key = a + "-" + n;
                if (static_cast<int>(fnv1a(key) & 1) == parity) out.push_back(std::move(key));
            }
        return out;
    };
    static const std::vector<std::string> tune = build(0);
    static const std::vector<std::string> eval = build(1);
    return pool == KeyPool::kTune ? tune : eval;
}

// content words (answers for niah/cwe/fwe), same parity split
inline const std::vector<std::string>& content_words(KeyPool pool) {
    static const auto build = [](int parity) {
        std::vector<std::string> out;
        for (const auto* list : {&adjectives(), &nouns()})
            for (const auto& w : *list)
                if (static_cast<int>(fnv1a(w) & 1) == parity) out.push_back(w);
        return out;
    };
    static const std::vector<std::string> tune = build(0);
    static const std::vector<std::string> eval = build(1);
    return pool == KeyPool::kTune ? tune : eval;
}

namespace detail {

inline int pick(Rng& rng, int n) { return uniform_int(rng, n); }

// first k elements of a seeded permutation of 0..n-1
inline std::vector<int> pick_distinct(Rng& rng, int n, int k) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < k; ++i) {
        const int j = i + uniform_int(rng, n - i);
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    idx.resize(static_cast<std::size_t>(k));
    return idx;
}

template <typename T>
void shuffle_all(Rng& rng, std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
        const int j = uniform_int(rng, i + 1);
        std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
    }
}

// digit string with the last digit's parity tied to the pool, so tune and
// eval values are structurally disjoint
inline std::string value_string(Rng& rng, int digits, KeyPool pool) {
    if (digits < 1) throw GenerationError("value_digits must be >= 1");
    std::string s;
    s += static_cast<char>('1' + uniform_int(rng, 9));
    for (int i = 1; i + 1 < digits; ++i) s += static_cast<char>('0' + uniform_int(rng, 10));
    if (digits > 1) s += static_cast<char>('0' + 2 * uniform_int(rng, 5) + (pool == KeyPool::kEval ? 1 : 0));
    return s;
}

// filler line consuming exactly n_tokens (>= 4): "note:" + words + newline
inline std::string pad_line(Rng& rng, int n_tokens) {
    if (n_tokens < 4) throw GenerationError("pad line needs at least 4 tokens");
    const auto& fill = filler_words();
    std::string s = "note:";
    for (int i = 0; i < n_tokens - 3; ++i)
        s += " " + fill[static_cast<std::size_t>(pick(rng, static_cast<int>(fill.size())))];
    s += "\n";
    return s;
}

inline void finish_sample(const Tokenizer& tok, const TaskSpec& spec, Sample& s) {
    s.kind = spec.kind;
    s.prompt_tokens = tok.tokenize(s.prompt);
    s.answer_tokens = tok.tokenize(s.answer);
    s.gen_len = static_cast<int>(s.prompt_tokens.size());
    if (s.gen_len != spec.target_len)
        throw GenerationError(std::string("length accounting bug: got ") + std::to_string(s.gen_len) +
                              " tokens for target " + std::to_string(spec.target_len));
}

inline Sample gen_line_retrieval(const Tokenizer& tok, const TaskSpec& spec, Rng& rng) {
    const auto& keys = line_keys(spec.pool);
    const std::string dummy_val(static_cast<std::size_t>(spec.value_digits), '1');
    const int l_t = static_cast<int>(tok.tokenize(line_text(keys[0], dummy_val)).size());
    const int q_t = static_cast<int>(tok.tokenize(question_text(keys[0])).size());
    const int m = spec.n_queries;
    if (m < 1) throw GenerationError("n_queries must be >= 1");
    // a solved pair is question + newline + answer + newline; key and value
    // token counts are position-independent so one render prices them all
    const int qa_t = static_cast<int>(
        tok.tokenize(question_text(keys[0]) + "\n" + answer_text(keys[0], dummy_val) + "\n").size());
    const int budget = spec.target_len - q_t - (m - 1) * qa_t - 4;
    const int n_lines = budget / l_t;
    if (n_lines < m)
        throw GenerationError("target_len " + std::to_string(spec.target_len) +
                              " cannot fit " + std::to_string(m) + " queries plus lines");
    const int pad = spec.target_len - q_t - (m - 1) * qa_t - n_lines * l_t;

    // one adjective per line so the query key resolves unambiguously by its
    // leading word; combos still draw from the pool's parity half
    std::vector<int> key_idx;
    {
        std::vector<int> perm(keys.size());
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size() - 1; i > 0; --i)
            std::swap(perm[i], perm[uniform_int(rng, i + 1)]);
        std::unordered_set<std::string> used;
        for (int idx : perm) {
            const std::string& k = keys[static_cast<std::size_t>(idx)];
            if (used.insert(k.substr(0, k.find('-'))).second) {
                key_idx.push_back(idx);
                if (static_cast<int>(key_idx.size()) == n_lines) break;
            }
        }
        if (static_cast<int>(key_idx.size()) < n_lines)
            throw GenerationError("target_len " + std::to_string(spec.target_len) +
                                  " needs more lines than there are distinct adjectives");
    }
    int tpos;
    if (uniform(rng) < spec.target_late) {
        const int tail = std::max(1, (n_lines * 3) / 10);
        tpos = n_lines - tail + pick(rng, tail);
    } else {
        tpos = pick(rng, n_lines);
    }
    // lines answered by the solved pairs; drawn after tpos so single-query
    // sampling is unchanged
    std::vector<int> early;
    if (m > 1) {
        early = pick_distinct(rng, n_lines - 1, m - 1);
        for (int& e : early)
            if (e >= tpos) ++e;
    }

    Sample s;
    s.prompt = pad_line(rng, pad);
    std::vector<std::string> line_key(static_cast<std::size_t>(n_lines));
    std::vector<std::string> line_val(static_cast<std::size_t>(n_lines));
    for (int i = 0; i < n_lines; ++i) {
        line_key[static_cast<std::size_t>(i)] = keys[static_cast<std::size_t>(key_idx[static_cast<std::size_t>(i)])];
        line_val[static_cast<std::size_t>(i)] = value_string(rng, spec.value_digits, spec.pool);
        s.prompt += line_text(line_key[static_cast<std::size_t>(i)], line_val[static_cast<std::size_t>(i)]);
    }
    for (int e : early)
        s.prompt += question_text(line_key[static_cast<std::size_t>(e)]) + "\n" +
                    answer_text(line_key[static_cast<std::size_t>(e)], line_val[static_cast<std::size_t>(e)]) + "\n";
    s.key = line_key[static_cast<std::size_t>(tpos)];
    s.value = line_val[static_cast<std::size_t>(tpos)];
    s.prompt += question_text(s.key);
    s.answer = answer_text(s.key, s.value);
    s.insert_pos = tpos;
    finish_sample(tok, spec, s);
    return s;
}

inline Sample gen_niah(const Tokenizer& tok, const TaskSpec& spec, Rng& rng) {
    const auto& pool = content_words(spec.pool);
    if (spec.needle_words < 1 || spec.needle_words > static_cast<int>(pool.size()))
        throw GenerationError("needle_words out of range");
    const auto widx = pick_distinct(rng, static_cast<int>(pool.size()), spec.needle_words);
    std::vector<std::string> needle_list;
    std::string joined;
    for (int i = 0; i < spec.needle_words; ++i) {
        const std::string& w = pool[static_cast<std::size_t>(widx[static_cast<std::size_t>(i)])];
        needle_list.push_back(w);
        joined += (i ? " " : "") + w;
    }
    const std::string needle = joined + ": remember this list.\n";
    const std::string question = "What is the list to remember?";
    const int needle_t = static_cast<int>(tok.tokenize(needle).size());
    const int q_t = static_cast<int>(tok.tokenize(question).size());

    // haystack words exclude the needle's answer words
    std::unordered_set<std::string> used(needle_list.begin(), needle_list.end());
    std::vector<std::string> hay;
    for (const auto* list : {&adjectives(), &nouns()})
        for (const auto& w : *list)
            if (!used.count(w)) hay.push_back(w);
    const auto hv = [&](Rng& r) { return hay[static_cast<std::size_t>(pick(r, static_cast<int>(hay.size())))]; };
    static const std::vector<std::string> verbs = {"sits", "rests", "stands", "waits"};

    const int n_sent = (spec.target_len - needle_t - q_t - 4) / 10;
    if (n_sent < 1) throw GenerationError("target_len cannot fit the needle, a sentence, and the question");
    const int pad = spec.target_len - needle_t - q_t - 10 * n_sent;

    const double depth = spec.needle_depth < 0 ? uniform(rng) : std::clamp(spec.needle_depth, 0.0, 1.0);
    const int ins = std::min(n_sent, static_cast<int>(depth * (n_sent + 1)));

    Sample s;
    s.prompt = pad_line(rng, pad);
    for (int i = 0; i < n_sent; ++i) {
        if (i == ins) s.prompt += needle;
        const std::string& verb = verbs[static_cast<std::size_t>(pick(rng, static_cast<int>(verbs.size())))];
        if (pick(rng, 2) == 0)
            s.prompt += "the " + hv(rng) + " " + hv(rng) + " " + verb + " near the " + hv(rng) + " " + hv(rng) + ".\n";
        else
            s.prompt += "a " + hv(rng) + " " + hv(rng) + " " + verb + " by the " + hv(rng) + " " + hv(rng) + ".\n";
    }
    if (ins == n_sent) s.prompt += needle;
    s.prompt += question;
    s.answer = "The list is " + joined + ".";
    s.value = joined;
    s.insert_pos = ins;
    finish_sample(tok, spec, s);
    return s;
}

// shared word-stream builder for cwe/fwe: `counts[i]` copies of each answer
// word plus rare filler, shuffled into one stream of exactly stream_len words
inline std::string word_stream(Rng& rng, const std::vector<std::string>& answers,
                               const std::vector<int>& counts, int stream_len) {
    int total = 0;
    for (int c : counts) total += c;
    const int rare_n = stream_len - total;
    if (rare_n < 0) throw GenerationError("target_len cannot fit the answer words");

    std::unordered_set<std::string> used(answers.begin(), answers.end());
    std::vector<std::string> rare_pool;
    for (const auto& w : filler_words()) rare_pool.push_back(w);
    for (const auto* list : {&adjectives(), &nouns()})
        for (const auto& w : *list)
            if (!used.count(w)) rare_pool.push_back(w);
    int min_count = counts.empty() ? 0 : *std::min_element(counts.begin(), counts.end());
    if (rare_n > 0 && (rare_n + static_cast<int>(rare_pool.size()) - 1) / static_cast<int>(rare_pool.size()) >= min_count)
        throw GenerationError("stream too long: rare words would rival answer frequencies");

    std::vector<std::string> stream;
    stream.reserve(static_cast<std::size_t>(stream_len));
    for (std::size_t i = 0; i < answers.size(); ++i)
        for (int c = 0; c < counts[i]; ++c) stream.push_back(answers[i]);
    shuffle_all(rng, rare_pool);
    for (int i = 0; i < rare_n; ++i)
        stream.push_back(rare_pool[static_cast<std::size_t>(i) % rare_pool.size()]);
    shuffle_all(rng, stream);

    std::string out;
    for (std::size_t i = 0; i < stream.size(); ++i) out += (i ? " " : "") + stream[i];
    return out;
}

inline Sample gen_cwe_fwe(const Tokenizer& tok, const TaskSpec& spec, Rng& rng) {
    const bool cwe = spec.kind == TaskKind::kCwe;
    const int n_ans = cwe ? spec.n_common : spec.n_frequent;
    const auto& pool = content_words(spec.pool);
    if (n_ans < 1 || n_ans > static_cast<int>(pool.size())) throw GenerationError("answer word count out of range");

    const std::string header = cwe ? "Find the common words in this text:\n" : "Find the frequent words in this text:\n";
    const std::string question = cwe ? "\nWhich words are common?" : "\nWhich words are frequent?";
    const int h_t = static_cast<int>(tok.tokenize(header).size());
    const int q_t = static_cast<int>(tok.tokenize(question).size());
    const int stream_len = spec.target_len - h_t - q_t;
    if (stream_len < 1) throw GenerationError("target_len cannot fit header and question");

    const auto widx = pick_distinct(rng, static_cast<int>(pool.size()), n_ans);
    std::vector<std::string> answers;
    std::string joined;
    for (int i = 0; i < n_ans; ++i) {
        answers.push_back(pool[static_cast<std::size_t>(widx[static_cast<std::size_t>(i)])]);
        joined += (i ? " " : "") + answers.back();
    }
    // cwe: uniform high frequency; fwe: strictly decreasing frequencies
    std::vector<int> counts(static_cast<std::size_t>(n_ans));
    for (int i = 0; i < n_ans; ++i) counts[static_cast<std::size_t>(i)] = cwe ? 6 : 6 + 2 * (n_ans - i);

    Sample s;
    s.prompt = header + word_stream(rng, answers, counts, stream_len) + question;
    s.answer = "Answer: " + joined + ".";
    s.value = joined;
    finish_sample(tok, spec, s);
    return s;
}

inline Sample gen_vt(const Tokenizer& tok, const TaskSpec& spec, Rng& rng) {
    if (spec.n_chains < 1 || spec.chain_len < 1) throw GenerationError("vt needs at least one chain and one link");
    // distinct value per chain
    std::vector<std::string> values;
    while (static_cast<int>(values.size()) < spec.n_chains) {
        std::string v = value_string(rng, spec.value_digits, spec.pool);
        if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(std::move(v));
    }

    std::vector<std::vector<std::string>> chain_vars(static_cast<std::size_t>(spec.n_chains));
    std::vector<int> first_line(static_cast<std::size_t>(spec.n_chains), -1);
    std::string body;
    int var_id = 1, line_no = 0;
    for (int r = 0; r < spec.chain_len; ++r) {
        auto order = pick_distinct(rng, spec.n_chains, spec.n_chains);
        for (int c : order) {
            auto& vars = chain_vars[static_cast<std::size_t>(c)];
            const std::string name = "X" + std::to_string(var_id++);
            if (r == 0) {
                body += name + " = " + values[static_cast<std::size_t>(c)] + "\n";
                first_line[static_cast<std::size_t>(c)] = line_no;
            } else {
                body += name + " = " + vars.back() + "\n";
            }
            vars.push_back(name);
            ++line_no;
        }
    }

    const int tgt = pick(rng, spec.n_chains);
    std::string var_list;
    for (std::size_t i = 0; i < chain_vars[static_cast<std::size_t>(tgt)].size(); ++i)
        var_list += (i ? " " : "") + chain_vars[static_cast<std::size_t>(tgt)][i];

    Sample s;
    const std::string question = "Which variables hold the value " + values[static_cast<std::size_t>(tgt)] + "?";
    const int body_t = static_cast<int>(tok.tokenize(body).size());
    const int q_t = static_cast<int>(tok.tokenize(question).size());
    const int pad = spec.target_len - body_t - q_t;
    if (pad < 4) throw GenerationError("target_len cannot fit the assignment chains");
    s.prompt = pad_line(rng, pad) + body + question;
    s.answer = var_list;
    s.key = values[static_cast<std::size_t>(tgt)];
    s.value = var_list;
    s.insert_pos = first_line[static_cast<std::size_t>(tgt)];
    finish_sample(tok, spec, s);
    return s;
}

}  // namespace detail

inline Sample generate_sample(const Tokenizer& tok, const TaskSpec& spec, int index) {
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(index)));
    switch (spec.kind) {
        case TaskKind::kLineRetrieval: return detail::gen_line_retrieval(tok, spec, rng);
        case TaskKind::kNiah: return detail::gen_niah(tok, spec, rng);
        case TaskKind::kCwe:
        case TaskKind::kFwe: return detail::gen_cwe_fwe(tok, spec, rng);
        case TaskKind::kVt: return detail::gen_vt(tok, spec, rng);
    }
    throw GenerationError("bad task kind");
}

inline std::vector<Sample> generate_dataset(const Tokenizer& tok, const TaskSpec& spec, int n) {
    if (n < 1) throw GenerationError("dataset size must be >= 1");
    std::vector<Sample> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(generate_sample(tok, spec, i));
    return out;
}

// words are maximal runs of letters and underscores
inline std::vector<std::string> split_words(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            cur += ch;
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

inline double score(const std::string& prediction, const Sample& s) {
    switch (s.kind) {
        case TaskKind::kLineRetrieval:
        case TaskKind::kVt:
            return prediction.find(s.value) != std::string::npos ? 1.0 : 0.0;
        case TaskKind::kNiah:
        case TaskKind::kCwe:
        case TaskKind::kFwe: {
            const auto expected_list = split_words(s.value);
            std::unordered_set<std::string> expected(expected_list.begin(), expected_list.end());
            if (expected.empty()) return 0.0;
            std::unordered_set<std::string> got;
            for (auto& w : split_words(prediction)) got.insert(std::move(w));
            int hit = 0;
            for (const auto& w : expected)
                if (got.count(w)) ++hit;
            return static_cast<double>(hit) / static_cast<double>(expected.size());
        }
    }
    throw GenerationError("bad task kind");
}

// prepend a solved exemplar; the answer (and scoring) stays the sample's own
inline Sample make_one_shot(const Tokenizer& tok, const Sample& sample, const Sample& exemplar, int cap) {
    if (exemplar.prompt_tokens.size() >= sample.prompt_tokens.size())
        throw GenerationError("exemplar must be shorter than the sample");
    Sample s = sample;
    s.prompt = exemplar.prompt + "\n" + exemplar.answer + "\n" + sample.prompt;
    s.prompt_tokens = tok.tokenize(s.prompt);
    const std::size_t want =
        exemplar.prompt_tokens.size() + exemplar.answer_tokens.size() + sample.prompt_tokens.size() + 2;
    if (s.prompt_tokens.size() != want) throw GenerationError("one-shot concatenation changed tokenization");
    s.gen_len = static_cast<int>(s.prompt_tokens.size());
    if (s.gen_len + static_cast<int>(s.answer_tokens.size()) + 3 > cap)
        throw LengthError("one-shot prompt exceeds the context cap");
    return s;
}

// JSONL: one header object, then one object per sample
inline void write_dataset(const std::string& path, const TaskSpec& spec, const std::vector<Sample>& samples) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for write: " + path);
    nlohmann::json head{{"tool", "seal-lab"},
                        {"version", kVersion},
                        {"kind", task_name(spec.kind)},
                        {"seed", spec.seed},
                        {"target_len", spec.target_len},
                        {"pool", pool_name(spec.pool)},
                        {"n", samples.size()}};
    f << head.dump() << "\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Sample& s = samples[i];
        nlohmann::json rec{{"kind", task_name(s.kind)},
                           {"seed", spec.seed},
                           {"index", i},
                           {"prompt", s.prompt},
                           {"answer", s.answer},
                           {"meta",
                            {{"key", s.key},
                             {"value", s.value},
                             {"insert_pos", s.insert_pos},
                             {"gen_len", s.gen_len}}}};
        f << rec.dump() << "\n";
    }
    if (!f) throw IoError("write failed: " + path);
}

inline std::vector<Sample> load_dataset(const std::string& path, const Tokenizer& tok) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open: " + path);
    std::vector<Sample> out;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw IoError("bad JSONL record in " + path + ": " + e.what());
        }
        if (j.contains("tool")) continue;  // header
        Sample s;
        s.kind = task_from_name(j.at("kind").get<std::string>());
        s.prompt = j.at("prompt").get<std::string>();
        s.answer = j.at("answer").get<std::string>();
        const auto& m = j.at("meta");
        s.key = m.at("key").get<std::string>();
        s.value = m.at("value").get<std::string>();
        s.insert_pos = m.at("insert_pos").get<int>();
        s.gen_len = m.at("gen_len").get<int>();
        s.prompt_tokens = tok.tokenize(s.prompt);
        s.answer_tokens = tok.tokenize(s.answer);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace seal
