// seal-lab: command-line surface for the attention-scaling laboratory.
// Every command is deterministic: identical flags and seed give bit-identical
// output files, whatever --threads says.

#include <charconv>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seal/analysis.hpp"
#include "seal/checkpoint.hpp"
#include "seal/csv.hpp"
#include "seal/eval.hpp"
#include "seal/extend.hpp"
#include "seal/merge.hpp"
#include "seal/probe.hpp"
#include "seal/tune.hpp"
#include "seal/version.hpp"

namespace {

using namespace seal;

std::uint64_t apply_seed_override(std::uint64_t seed) {
    const char* env = std::getenv("SEAL_LAB_SEED");
    if (!env || !*env) return seed;
    std::uint64_t v = 0;
    const auto res = std::from_chars(env, env + std::string(env).size(), v);
    if (res.ec != std::errc{} || *res.ptr != '\0')
        throw IoError(std::string("SEAL_LAB_SEED is not an integer: ") + env);
    return v;
}

// Resolved-config copy written next to every primary output; its hash goes
// into the artifact stamp so files identify the run that made them. The
// threads option is dropped: results are thread-count independent by
// contract, so the artifact set must be too.
std::string write_resolved_config(CLI::App* cmd, const std::string& out_path) {
    const std::string raw = cmd->config_to_str(true, true);
    std::string resolved;
    std::size_t pos = 0;
    while (pos < raw.size()) {
        std::size_t end = raw.find('\n', pos);
        if (end == std::string::npos) end = raw.size();
        const std::string line = raw.substr(pos, end - pos);
        pos = end + 1;
        if (line.rfind("threads=", 0) == 0) continue;
        resolved += line + "\n";
    }
    write_text_file(out_path + ".config", resolved);
    return resolved;
}

struct TaskOpts {
    std::string task = "line-retrieval";
    int len = 256;
    std::uint64_t seed = 1;
    std::string pool = "eval";
    int value_digits = 5;
    double late = 0.0;
    int queries = 1;
    double depth = -1.0;
    int needle_words = 8;
    int n_common = 4;
    int n_frequent = 3;
    int chains = 3;
    int chain_len = 4;
};

void add_task_flags(CLI::App* c, TaskOpts& t) {
    c->add_option("--task", t.task, "Task kind: line-retrieval | niah | cwe | fwe | vt")
        ->check(CLI::IsMember({"line-retrieval", "niah", "cwe", "fwe", "vt"}));
    c->add_option("--len", t.len, "Prompt length in tokens");
    c->add_option("--seed", t.seed, "Generation seed");
    c->add_option("--pool", t.pool, "Content pool: tune | eval")
        ->check(CLI::IsMember({"tune", "eval"}));
    c->add_option("--value-digits", t.value_digits, "Digits per retrieval value");
    c->add_option("--late", t.late, "Fraction of targets forced into the last lines");
    c->add_option("--queries", t.queries, "Solved question/answer pairs per sample (last one is the target)");
    c->add_option("--depth", t.depth, "NIAH needle depth fraction; <0 randomizes");
    c->add_option("--needle-words", t.needle_words, "NIAH needle word count");
    c->add_option("--n-common", t.n_common, "CWE answer word count");
    c->add_option("--n-frequent", t.n_frequent, "FWE answer word count");
    c->add_option("--chains", t.chains, "VT chain count");
    c->add_option("--chain-len", t.chain_len, "VT links per chain");
}

TaskSpec to_spec(const TaskOpts& t) {
    TaskSpec s;
    s.kind = task_from_name(t.task);
    s.target_len = t.len;
    s.seed = apply_seed_override(t.seed);
    s.pool = pool_from_name(t.pool);
    s.value_digits = t.value_digits;
    s.target_late = t.late;
    s.n_queries = t.queries;
    s.needle_depth = t.depth;
    s.needle_words = t.needle_words;
    s.n_common = t.n_common;
    s.n_frequent = t.n_frequent;
    s.n_chains = t.chains;
    s.chain_len = t.chain_len;
    return s;
}

struct ExtendOpts {
    std::string method = "none";
    double factor = 4.0;
    int group = 6;
    int neighbor = 64;
};

void add_extend_flags(CLI::App* c, ExtendOpts& e) {
    c->add_option("--extend", e.method, "Context extension: none | ntk | self-extend")
        ->check(CLI::IsMember({"none", "ntk", "self-extend"}));
    c->add_option("--factor", e.factor, "NTK factor");
    c->add_option("--group", e.group, "Self-Extend group size");
    c->add_option("--neighbor", e.neighbor, "Self-Extend neighbor window");
}

PositionScheme resolve_scheme(const ExtendOpts& e, const ModelConfig& cfg) {
    if (e.method == "ntk") return ExtensionSpec::ntk(e.factor, cfg.max_train_pos).scheme();
    if (e.method == "self-extend")
        return ExtensionSpec::self_extend(e.group, e.neighbor, cfg.max_train_pos).scheme();
    return PositionScheme::standard();
}

ScaleSet<float> load_or_ones(const std::string& path, const ModelConfig& cfg) {
    if (path.empty()) return ScaleSet<float>::ones(cfg, ScaleMode::kHead);
    auto s = load_scales<float>(path);
    s.check_model(cfg);
    return s;
}

std::vector<int> parse_lengths(const std::vector<int>& lengths) {
    if (lengths.empty()) throw GenerationError("--lengths needs at least one value");
    return lengths;
}

// Pulls the score column back out of an eval CSV (comments and header skipped).
std::vector<double> read_scores_csv(const std::string& path) {
    const std::string text = read_text_file(path);
    std::vector<double> scores;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        const std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.empty() || line[0] == '#' || line.rfind("length", 0) == 0) continue;
        const auto c1 = line.find(',');
        if (c1 == std::string::npos) throw IoError("not an eval csv row in " + path + ": " + line);
        auto c2 = line.find(',', c1 + 1);
        if (c2 == std::string::npos) c2 = line.size();
        scores.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
    }
    if (scores.empty()) throw IoError("no score rows in " + path);
    return scores;
}

std::string sanitize_cell(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

// ---- gen-data ----------------------------------------------------------

struct GenOpts {
    TaskOpts task;
    int n = 50;
    std::string out = "data.jsonl";
};

void cmd_gen_data(CLI::App* cmd, const GenOpts& o) {
    const auto tok = make_tokenizer();
    const TaskSpec spec = to_spec(o.task);
    const auto samples = generate_dataset(tok, spec, o.n);
    write_dataset(o.out, spec, samples);
    write_resolved_config(cmd, o.out);
    std::cout << "wrote " << o.out << " (" << samples.size() << " samples, task "
              << task_name(spec.kind) << ", len " << spec.target_len << ")\n";
}

// ---- train-base --------------------------------------------------------

struct TrainOpts {
    std::vector<std::string> data;
    std::string out = "base.ckpt";
    int layers = 4, heads = 8, kv_heads = 8, d_head = 16, d_ff = 256, vocab = 512, max_pos = 256;
    double theta = 10000.0;
    double lr = 1e-3;
    int epochs = 1;
    int batch = 1;
    double clip = 1.0;
    std::uint64_t seed = 1;
    bool answer_loss = false;
};

void cmd_train_base(CLI::App* cmd, const TrainOpts& o) {
    ModelConfig cfg;
    cfg.n_layers = o.layers;
    cfg.n_heads = o.heads;
    cfg.n_kv_heads = o.kv_heads;
    cfg.d_head = o.d_head;
    cfg.d_model = o.heads * o.d_head;
    cfg.d_ff = o.d_ff;
    cfg.vocab_size = o.vocab;
    cfg.max_train_pos = o.max_pos;
    cfg.rope_theta = o.theta;
    cfg.validate();

    const std::uint64_t seed = apply_seed_override(o.seed);
    const auto tok = make_tokenizer();
    std::vector<Sample> corpus;
    for (const auto& path : o.data) {
        auto part = load_dataset(path, tok);
        std::cerr << "loaded " << part.size() << " samples from " << path << "\n";
        corpus.insert(corpus.end(), part.begin(), part.end());
    }
    if (corpus.empty() && o.epochs > 0) throw TrainingError("train-base needs --data unless --epochs 0");

    auto w = random_weights<float>(cfg, derive_seed(seed, 0xBA5E));
    TrainHyper hy;
    hy.lr = o.lr;
    hy.epochs = o.epochs;
    hy.batch = o.batch;
    hy.clip_norm = o.clip;
    hy.seed = derive_seed(seed, 0x5EED);
    hy.answer_loss = o.answer_loss;
    nlohmann::json meta{{"phase", "base"}, {"seed", seed}, {"epochs", o.epochs}, {"data", o.data}};
    if (o.epochs > 0) {
        const auto rep = train_base(w, tok, corpus, hy, PositionScheme::standard());
        meta["steps"] = rep.steps;
        meta["first_loss"] = rep.losses.front();
        meta["final_loss"] = rep.losses.back();
        std::cerr << "trained " << rep.steps << " steps in " << rep.wall_seconds << "s, loss "
                  << rep.losses.front() << " -> " << rep.losses.back() << "\n";
    }
    save_checkpoint(w, o.out, meta);
    write_resolved_config(cmd, o.out);
    std::cout << "wrote " << o.out << "\n";
}

// ---- tune --------------------------------------------------------------

struct TuneOpts {
    std::string ckpt;
    std::string data;
    std::string out = "scales.json";
    std::string mode = "seal-h";
    double lr = 1e-2;
    int epochs = 1;
    int batch = 1;
    ExtendOpts extend;
};

void cmd_tune(CLI::App* cmd, const TuneOpts& o) {
    const auto tok = make_tokenizer();
    const auto ckpt = load_checkpoint(o.ckpt);
    const auto data = load_dataset(o.data, tok);
    TuneConfig tc;
    tc.mode = o.mode == "seal-c" ? ScaleMode::kChannel : ScaleMode::kHead;
    tc.lr = o.lr;
    tc.epochs = o.epochs;
    tc.batch = o.batch;
    const auto scheme = resolve_scheme(o.extend, ckpt.weights.cfg);
    const auto rep = tune_scales(ckpt.weights, tok, data, tc, scheme);
    save_scales(rep.scales, o.out);
    const std::string resolved = write_resolved_config(cmd, o.out);

    CsvWriter losses;
    losses.comment(run_stamp(apply_seed_override(0), resolved));
    losses.row({"step", "loss"});
    for (std::size_t i = 0; i < rep.losses.size(); ++i)
        losses.row({fmt_int(static_cast<long>(i)), fmt_double(rep.losses[i])});
    write_text_file(o.out + ".losses.csv", losses.text);

    const auto st = scale_stats(rep.scales);
    std::cout << "tuned " << scale_mode_name(tc.mode) << " scales over " << rep.steps
              << " steps: loss " << rep.losses.front() << " -> " << rep.losses.back()
              << ", scale min " << st.min << " max " << st.max << " mean " << st.mean << "\n";
}

// ---- eval --------------------------------------------------------------

struct EvalOpts {
    std::string ckpt;
    std::string scales;
    TaskOpts task;
    std::vector<int> lengths{64, 128, 192, 256, 384, 512};
    std::vector<double> depths;
    int n = 50;
    int threads = 1;
    std::string out = "scores.csv";
    ExtendOpts extend;
};

void cmd_eval(CLI::App* cmd, const EvalOpts& o) {
    const auto tok = make_tokenizer();
    const auto ckpt = load_checkpoint(o.ckpt);
    const auto scales = load_or_ones(o.scales, ckpt.weights.cfg);
    const auto scheme = resolve_scheme(o.extend, ckpt.weights.cfg);
    TaskSpec spec = to_spec(o.task);
    const std::string resolved = write_resolved_config(cmd, o.out);
    const std::string stamp = run_stamp(spec.seed, resolved);

    CsvWriter csv;
    csv.comment(stamp);
    if (!o.depths.empty()) {
        if (spec.kind != TaskKind::kNiah)
            throw GenerationError("--depths only applies to --task niah");
        const auto grid =
            niah_grid(ckpt.weights, scales, scheme, tok, spec, o.depths,
                      parse_lengths(o.lengths), o.n, o.threads);
        csv.row({"depth", "length", "score", "n"});
        for (const auto& g : grid) {
            csv.row({fmt_double(g.depth), fmt_int(g.length), fmt_double(g.score), fmt_int(o.n)});
            std::cout << "depth " << g.depth << " len " << g.length << " score " << g.score << "\n";
        }
    } else {
        const auto curve = score_vs_length(ckpt.weights, scales, scheme, tok, spec,
                                           parse_lengths(o.lengths), o.n, o.threads);
        csv.row({"length", "score", "n"});
        for (const auto& p : curve) {
            csv.row({fmt_int(p.length), fmt_double(p.score), fmt_int(o.n)});
            std::cout << "len " << p.length << " score " << p.score << "\n";
        }
    }
    write_text_file(o.out, csv.text);
}

// ---- sweep -------------------------------------------------------------

struct SweepOpts {
    std::string ckpt;
    std::string scales;
    TaskOpts task;
    int mid_len = 128;
    int long_len = 384;
    int n = 32;
    int threads = 1;
    bool channel = false;
    int layer = 0;
    int head = 0;
    std::string out = "sweep.csv";
    ExtendOpts extend;
};

void cmd_sweep(CLI::App* cmd, const SweepOpts& o) {
    const auto tok = make_tokenizer();
    const auto ckpt = load_checkpoint(o.ckpt);
    const auto scales = load_or_ones(o.scales, ckpt.weights.cfg);
    const auto scheme = resolve_scheme(o.extend, ckpt.weights.cfg);
    TaskSpec spec = to_spec(o.task);
    const std::uint64_t base_seed = spec.seed;
    const std::string resolved = write_resolved_config(cmd, o.out);
    const std::string stamp = run_stamp(base_seed, resolved);

    spec.target_len = o.long_len;
    spec.seed = derive_seed(base_seed, static_cast<std::uint64_t>(o.long_len));
    const auto eval_long = generate_dataset(tok, spec, o.n);

    if (o.channel) {
        const auto r = channel_sweep(ckpt.weights, scales, scheme, tok, o.layer, o.head,
                                     eval_long, o.threads);
        write_text_file(o.out, channel_sweep_csv(r, stamp));
        std::cout << "channel sweep layer " << o.layer << " head " << o.head << ": baseline "
                  << r.baseline_long << "\n";
        return;
    }

    spec.target_len = o.mid_len;
    spec.seed = derive_seed(base_seed, static_cast<std::uint64_t>(o.mid_len));
    const auto eval_mid = generate_dataset(tok, spec, o.n);
    const auto r = head_sweep(ckpt.weights, scales, scheme, tok, eval_mid, eval_long, o.threads);
    write_text_file(o.out, sweep_csv(r, stamp));
    std::cout << "head sweep: baseline mid " << r.baseline_mid << " long " << r.baseline_long
              << " over " << r.entries.size() << " heads\n";
}

// ---- merge -------------------------------------------------------------

struct MergeOpts {
    std::string ckpt;
    std::string scales;
    std::string out = "merged.ckpt";
    std::string target = "auto";
    bool verify = false;
    double tol = 1e-5;
    int prompts = 100;
    std::uint64_t seed = 1;
};

void cmd_merge(CLI::App* cmd, const MergeOpts& o) {
    const auto ckpt = load_checkpoint(o.ckpt);
    auto scales = load_scales<float>(o.scales);
    scales.check_model(ckpt.weights.cfg);
    MergeTarget target = MergeTarget::kAuto;
    if (o.target == "v_proj") target = MergeTarget::kVProj;
    if (o.target == "o_proj") target = MergeTarget::kOProj;

    const auto merged = merge_scales(ckpt.weights, scales, target);
    if (o.verify) {
        const std::uint64_t seed = apply_seed_override(o.seed);
        const auto& cfg = ckpt.weights.cfg;
        std::vector<std::vector<int>> prompts;
        for (int i = 0; i < o.prompts; ++i) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
            const int len = 8 + static_cast<int>(uniform_int(rng, static_cast<std::uint64_t>(cfg.max_train_pos - 8)));
            std::vector<int> p(static_cast<std::size_t>(len));
            for (auto& v : p) v = static_cast<int>(uniform_int(rng, static_cast<std::uint64_t>(cfg.vocab_size)));
            prompts.push_back(std::move(p));
        }
        const auto rep = verify_merge(ckpt.weights, scales, merged, PositionScheme::standard(),
                                      prompts, o.tol, target);
        std::cout << "verify: worst |logit diff| " << rep.worst << " over " << o.prompts
                  << " prompts (tol " << o.tol << ")\n";
        if (!rep.pass)
            throw VerifyError("merged model diverges: worst |logit diff| " +
                              fmt_double(rep.worst) + " > tol " + fmt_double(o.tol));
    }

    nlohmann::json meta = ckpt.meta;
    meta["merged_from"] = o.ckpt;
    meta["scale_file_hash"] = fnv1a(read_text_file(o.scales));
    meta["merge_target"] = merge_target_name(resolve_merge_target(ckpt.weights.cfg, target));
    save_checkpoint(merged, o.out, meta);
    write_resolved_config(cmd, o.out);
    std::cout << "wrote " << o.out << "\n";
}

// ---- direct-effect -----------------------------------------------------

struct DirectOpts {
    std::string ckpt;
    std::string scales;
    TaskOpts task;
    std::vector<int> targets;
    int probe_pos = -1;
    std::string out = "direct_effect.csv";
    ExtendOpts extend;
};

void cmd_direct_effect(CLI::App* cmd, const DirectOpts& o) {
    const auto tok = make_tokenizer();
    const auto ckpt = load_checkpoint(o.ckpt);
    const auto scales = load_or_ones(o.scales, ckpt.weights.cfg);
    const auto scheme = resolve_scheme(o.extend, ckpt.weights.cfg);
    const TaskSpec spec = to_spec(o.task);
    const auto sample = generate_sample(tok, spec, 0);

    std::vector<int> ids{tok.bos_id};
    ids.insert(ids.end(), sample.prompt_tokens.begin(), sample.prompt_tokens.end());
    ids.push_back(tok.ans_id);
    std::vector<int> targets = o.targets;
    if (targets.empty()) targets.push_back(sample.answer_tokens.at(0));

    const auto rep = direct_effect(ckpt.weights, scales, ids, scheme, o.probe_pos, targets);
    const std::string resolved = write_resolved_config(cmd, o.out);
    const std::string stamp = run_stamp(spec.seed, resolved);

    CsvWriter csv;
    csv.comment(stamp);
    csv.row({"layer", "head", "target", "delta"});
    for (int l = 0; l < rep.n_layers; ++l)
        for (int h = 0; h < rep.n_heads; ++h)
            for (std::size_t ti = 0; ti < rep.targets.size(); ++ti)
                csv.row({fmt_int(l), fmt_int(h), fmt_int(rep.targets[ti]),
                         fmt_double(rep.at(l, h, static_cast<int>(ti)))});
    write_text_file(o.out, csv.text);

    nlohmann::json j{{"stamp", stamp},
                     {"probe_pos", rep.probe_pos},
                     {"targets", rep.targets},
                     {"n_layers", rep.n_layers},
                     {"n_heads", rep.n_heads},
                     {"delta", rep.delta},
                     {"final_logits", rep.final_logits}};
    write_text_file(o.out + ".json", j.dump(2) + "\n");
    std::cout << "wrote " << o.out << " (probe position " << rep.probe_pos << ", "
              << targets.size() << " targets)\n";
}

// ---- transfer ----------------------------------------------------------

struct TransferOpts {
    std::string manifest;
    std::string out = "transfer.csv";
};

void cmd_transfer(CLI::App* cmd, const TransferOpts& o) {
    nlohmann::json m;
    try {
        m = nlohmann::json::parse(read_text_file(o.manifest));
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("bad transfer manifest: ") + e.what());
    }
    std::vector<std::vector<double>> baseline;
    for (const auto& path : m.at("baseline")) baseline.push_back(read_scores_csv(path.get<std::string>()));
    std::vector<std::vector<std::vector<double>>> tuned;
    for (const auto& row : m.at("tuned")) {
        std::vector<std::vector<double>> r;
        for (const auto& path : row) r.push_back(read_scores_csv(path.get<std::string>()));
        tuned.push_back(std::move(r));
    }

    const auto matrix = transfer_matrix(baseline, tuned);
    const std::string resolved = write_resolved_config(cmd, o.out);
    CsvWriter csv;
    csv.comment(run_stamp(0, resolved));
    csv.row({"tuned", "task", "value", "defined", "numerator", "denominator"});
    for (std::size_t a = 0; a < matrix.size(); ++a)
        for (std::size_t b = 0; b < matrix[a].size(); ++b) {
            const auto& t = matrix[a][b];
            csv.row({fmt_int(static_cast<long>(a)), fmt_int(static_cast<long>(b)),
                     fmt_double(t.value), t.defined ? "1" : "0", fmt_double(t.numerator),
                     fmt_double(t.denominator)});
        }
    write_text_file(o.out, csv.text);
    std::cout << "wrote " << o.out << " (" << matrix.size() << " x "
              << (matrix.empty() ? 0 : matrix[0].size()) << ")\n";
}

// ---- hyper-sweep -------------------------------------------------------

struct HyperOpts {
    std::string ckpt;
    std::vector<double> lrs{5e-3, 1e-2, 2e-2, 3e-2};
    std::vector<int> ns{10, 30, 50, 70, 99};
    std::string mode = "seal-h";
    int epochs = 1;
    int tune_len = 512;
    int eval_len = 512;
    int eval_n = 50;
    int threads = 1;
    std::uint64_t seed = 1;
    std::string task = "line-retrieval";
    std::string out = "hyper_sweep.csv";
    ExtendOpts extend;
};

void cmd_hyper_sweep(CLI::App* cmd, const HyperOpts& o) {
    const auto tok = make_tokenizer();
    const auto ckpt = load_checkpoint(o.ckpt);
    const auto scheme = resolve_scheme(o.extend, ckpt.weights.cfg);
    const std::uint64_t seed = apply_seed_override(o.seed);

    TaskSpec eval_spec;
    eval_spec.kind = task_from_name(o.task);
    eval_spec.target_len = o.eval_len;
    eval_spec.pool = KeyPool::kEval;
    eval_spec.seed = derive_seed(seed, 0xE7A1);
    const auto eval_set = generate_dataset(tok, eval_spec, o.eval_n);

    const std::string resolved = write_resolved_config(cmd, o.out);
    CsvWriter csv;
    csv.comment(run_stamp(seed, resolved));
    csv.row({"lr", "n", "score", "status"});
    for (std::size_t li = 0; li < o.lrs.size(); ++li) {
        for (std::size_t ni = 0; ni < o.ns.size(); ++ni) {
            TaskSpec tune_spec = eval_spec;
            tune_spec.pool = KeyPool::kTune;
            tune_spec.target_len = o.tune_len;
            tune_spec.seed = derive_seed(seed, li * 100 + ni);
            std::string status = "ok";
            double score = 0.0;
            try {
                const auto data = generate_dataset(tok, tune_spec, o.ns[ni]);
                TuneConfig tc;
                tc.mode = o.mode == "seal-c" ? ScaleMode::kChannel : ScaleMode::kHead;
                tc.lr = o.lrs[li];
                tc.epochs = o.epochs;
                const auto rep = tune_scales(ckpt.weights, tok, data, tc, scheme);
                score = evaluate(ckpt.weights, rep.scales, scheme, tok, eval_set, o.threads).mean;
            } catch (const Error& e) {
                status = "error: " + sanitize_cell(e.what());
            }
            csv.row({fmt_double(o.lrs[li]), fmt_int(o.ns[ni]), fmt_double(score), status});
            std::cerr << "lr " << o.lrs[li] << " n " << o.ns[ni] << " -> "
                      << (status == "ok" ? fmt_double(score) : status) << "\n";
        }
    }
    write_text_file(o.out, csv.text);
    std::cout << "wrote " << o.out << " (" << o.lrs.size() * o.ns.size() << " cells)\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"seal-lab: desk-scale laboratory for per-head attention scaling"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default(true);
    app.set_version_flag("--version", std::string(seal::kVersion));
    app.set_config("--config", "", "Read options from an INI/TOML-style file");
    app.allow_config_extras(false);

    auto gen = std::make_shared<GenOpts>();
    auto* gen_cmd = app.add_subcommand("gen-data", "Generate a synthetic task dataset (JSONL)");
    add_task_flags(gen_cmd, gen->task);
    gen_cmd->add_option("--n", gen->n, "Sample count")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--out", gen->out, "Output JSONL path");
    gen_cmd->callback([gen, gen_cmd] { cmd_gen_data(gen_cmd, *gen); });

    auto tr = std::make_shared<TrainOpts>();
    auto* tr_cmd = app.add_subcommand("train-base", "Pretrain a base model on task data");
    tr_cmd->add_option("--data", tr->data, "JSONL dataset paths")->delimiter(',');
    tr_cmd->add_option("--out", tr->out, "Output checkpoint path");
    tr_cmd->add_option("--layers", tr->layers);
    tr_cmd->add_option("--heads", tr->heads);
    tr_cmd->add_option("--kv-heads", tr->kv_heads);
    tr_cmd->add_option("--d-head", tr->d_head);
    tr_cmd->add_option("--d-ff", tr->d_ff);
    tr_cmd->add_option("--vocab", tr->vocab);
    tr_cmd->add_option("--max-pos", tr->max_pos);
    tr_cmd->add_option("--theta", tr->theta);
    tr_cmd->add_option("--lr", tr->lr);
    tr_cmd->add_option("--epochs", tr->epochs);
    tr_cmd->add_option("--batch", tr->batch);
    tr_cmd->add_option("--clip", tr->clip, "Gradient-norm clip; 0 disables");
    tr_cmd->add_flag("--answer-loss", tr->answer_loss, "Train on answer positions only");
    tr_cmd->add_option("--seed", tr->seed);
    tr_cmd->callback([tr, tr_cmd] { cmd_train_base(tr_cmd, *tr); });

    auto tu = std::make_shared<TuneOpts>();
    auto* tu_cmd = app.add_subcommand("tune", "Tune attention scales on a frozen base model");
    tu_cmd->add_option("--ckpt", tu->ckpt, "Base checkpoint")->required();
    tu_cmd->add_option("--data", tu->data, "Tuning JSONL")->required();
    tu_cmd->add_option("--out", tu->out, "Output scales JSON");
    tu_cmd->add_option("--mode", tu->mode, "seal-h | seal-c")
        ->check(CLI::IsMember({"seal-h", "seal-c"}));
    tu_cmd->add_option("--lr", tu->lr);
    tu_cmd->add_option("--epochs", tu->epochs);
    tu_cmd->add_option("--batch", tu->batch);
    add_extend_flags(tu_cmd, tu->extend);
    tu_cmd->callback([tu, tu_cmd] { cmd_tune(tu_cmd, *tu); });

    auto ev = std::make_shared<EvalOpts>();
    auto* ev_cmd = app.add_subcommand("eval", "Score a model across prompt lengths");
    ev_cmd->add_option("--ckpt", ev->ckpt, "Checkpoint")->required();
    ev_cmd->add_option("--scales", ev->scales, "Optional scales JSON");
    add_task_flags(ev_cmd, ev->task);
    ev_cmd->add_option("--lengths", ev->lengths, "Prompt lengths")->delimiter(',');
    ev_cmd->add_option("--depths", ev->depths, "NIAH depth fractions (grid mode)")->delimiter(',');
    ev_cmd->add_option("--n", ev->n, "Samples per point")->check(CLI::PositiveNumber);
    ev_cmd->add_option("--threads", ev->threads)->check(CLI::PositiveNumber);
    ev_cmd->add_option("--out", ev->out, "Output CSV path");
    add_extend_flags(ev_cmd, ev->extend);
    ev_cmd->callback([ev, ev_cmd] { cmd_eval(ev_cmd, *ev); });

    auto sw = std::make_shared<SweepOpts>();
    auto* sw_cmd = app.add_subcommand("sweep", "Head (or channel) pruning sweep");
    sw_cmd->add_option("--ckpt", sw->ckpt, "Checkpoint")->required();
    sw_cmd->add_option("--scales", sw->scales, "Optional scales JSON");
    add_task_flags(sw_cmd, sw->task);
    sw_cmd->add_option("--mid-len", sw->mid_len, "Mid prompt length");
    sw_cmd->add_option("--long-len", sw->long_len, "Long prompt length");
    sw_cmd->add_option("--n", sw->n, "Samples per eval set")->check(CLI::PositiveNumber);
    sw_cmd->add_option("--threads", sw->threads)->check(CLI::PositiveNumber);
    sw_cmd->add_flag("--channel", sw->channel, "Sweep channels of one head instead");
    sw_cmd->add_option("--layer", sw->layer, "Layer for --channel");
    sw_cmd->add_option("--head", sw->head, "Head for --channel");
    sw_cmd->add_option("--out", sw->out, "Output CSV path");
    add_extend_flags(sw_cmd, sw->extend);
    sw_cmd->callback([sw, sw_cmd] { cmd_sweep(sw_cmd, *sw); });

    auto mg = std::make_shared<MergeOpts>();
    auto* mg_cmd = app.add_subcommand("merge", "Fold scales into the weights offline");
    mg_cmd->add_option("--ckpt", mg->ckpt, "Base checkpoint")->required();
    mg_cmd->add_option("--scales", mg->scales, "Scales JSON")->required();
    mg_cmd->add_option("--out", mg->out, "Output checkpoint path");
    mg_cmd->add_option("--target", mg->target, "auto | v_proj | o_proj")
        ->check(CLI::IsMember({"auto", "v_proj", "o_proj"}));
    mg_cmd->add_flag("--verify", mg->verify, "Check merged-vs-scaled logits");
    mg_cmd->add_option("--tol", mg->tol, "Verification tolerance");
    mg_cmd->add_option("--prompts", mg->prompts, "Verification prompt count")
        ->check(CLI::PositiveNumber);
    mg_cmd->add_option("--seed", mg->seed, "Verification prompt seed");
    mg_cmd->callback([mg, mg_cmd] { cmd_merge(mg_cmd, *mg); });

    auto de = std::make_shared<DirectOpts>();
    auto* de_cmd = app.add_subcommand("direct-effect", "Per-head logit attribution at a position");
    de_cmd->add_option("--ckpt", de->ckpt, "Checkpoint")->required();
    de_cmd->add_option("--scales", de->scales, "Optional scales JSON");
    add_task_flags(de_cmd, de->task);
    de_cmd->add_option("--targets", de->targets, "Target token ids (default: first answer token)")
        ->delimiter(',');
    de_cmd->add_option("--probe-pos", de->probe_pos, "Probe position; -1 = last");
    de_cmd->add_option("--out", de->out, "Output CSV path (JSON written alongside)");
    add_extend_flags(de_cmd, de->extend);
    de_cmd->callback([de, de_cmd] { cmd_direct_effect(de_cmd, *de); });

    auto tf = std::make_shared<TransferOpts>();
    auto* tf_cmd = app.add_subcommand("transfer", "Transferability matrix from eval CSVs");
    tf_cmd->add_option("--manifest", tf->manifest,
                       "JSON: {\"baseline\": [csv...], \"tuned\": [[csv...], ...]}")
        ->required();
    tf_cmd->add_option("--out", tf->out, "Output CSV path");
    tf_cmd->callback([tf, tf_cmd] { cmd_transfer(tf_cmd, *tf); });

    auto hs = std::make_shared<HyperOpts>();
    auto* hs_cmd = app.add_subcommand("hyper-sweep", "Learning-rate x sample-count tuning grid");
    hs_cmd->add_option("--ckpt", hs->ckpt, "Base checkpoint")->required();
    hs_cmd->add_option("--lrs", hs->lrs, "Learning rates")->delimiter(',');
    hs_cmd->add_option("--ns", hs->ns, "Sample counts")->delimiter(',');
    hs_cmd->add_option("--mode", hs->mode, "seal-h | seal-c")
        ->check(CLI::IsMember({"seal-h", "seal-c"}));
    hs_cmd->add_option("--epochs", hs->epochs);
    hs_cmd->add_option("--tune-len", hs->tune_len);
    hs_cmd->add_option("--eval-len", hs->eval_len);
    hs_cmd->add_option("--eval-n", hs->eval_n)->check(CLI::PositiveNumber);
    hs_cmd->add_option("--threads", hs->threads)->check(CLI::PositiveNumber);
    hs_cmd->add_option("--seed", hs->seed);
    hs_cmd->add_option("--task", hs->task)
        ->check(CLI::IsMember({"line-retrieval", "niah", "cwe", "fwe", "vt"}));
    hs_cmd->add_option("--out", hs->out, "Output CSV path");
    add_extend_flags(hs_cmd, hs->extend);
    hs_cmd->callback([hs, hs_cmd] { cmd_hyper_sweep(hs_cmd, *hs); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const seal::VerifyError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return 3;
    } catch (const seal::TrainingError& e) {
        std::cerr << "training failed: " << e.what() << "\n";
        return 4;
    } catch (const seal::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
