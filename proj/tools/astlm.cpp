// astlm: statement-level Java tokenization, corpus statistics, and LSTM
// language modeling in one binary.
//
// Subcommands: tokenize, stats, build, train, eval, predict, kinds.
// Informational output goes to stderr; machine-readable results to stdout.
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include "astlm/corpus.hpp"
#include "astlm/errors.hpp"
#include "astlm/lstm.hpp"

namespace {

using namespace astlm;

EmitMode parse_mode(const std::string& mode) {
    if (mode == "paper-compat") return EmitMode::paper_compat;
    if (mode == "canonical") return EmitMode::canonical;
    throw Error("unknown mode '" + mode + "' (expected paper-compat or canonical)");
}

void add_config_options(CLI::App* cmd, LstmConfig& config) {
    cmd->add_option("--layers", config.layers, "RNN layers (must stay 2)");
    cmd->add_option("--hidden_size", config.hidden_size, "hidden units per layer");
    cmd->add_option("--vocab_size", config.vocab_size, "model vocabulary size");
    cmd->add_option("--unroll_steps", config.unroll_steps, "BPTT window length");
    cmd->add_option("--batch_size", config.batch_size, "parallel lanes");
    cmd->add_option("--dropout_keep", config.dropout_keep, "keep probability");
    cmd->add_option("--max_grad_norm", config.max_grad_norm, "global norm clip");
    cmd->add_option("--epochs", config.epochs, "training epochs");
    cmd->add_option("--lr_initial", config.lr_initial, "initial learning rate");
    cmd->add_option("--lr_decay", config.lr_decay, "per-epoch decay factor");
    cmd->add_option("--decay_start_epoch", config.decay_start_epoch,
                    "first epoch with a decayed rate");
    cmd->add_option("--init_scale", config.init_scale, "uniform init scale");
    cmd->add_option("--seed", config.seed, "RNG seed");
}

int run_tokenize(const std::string& src_dir, const std::string& out_path,
                 const std::string& mode, bool verbose) {
    IngestReport report;
    auto sentences = ingest_repository(src_dir, parse_mode(mode), report);
    write_sentences(out_path, sentences);
    std::cerr << "files\t" << report.files << "\nmethods\t" << report.methods
              << "\nskipped\t" << report.skipped << "\nio_errors\t" << report.io_errors
              << "\nsentences\t" << sentences.size() << "\n";
    if (verbose)
        for (const Diagnostic& d : report.diagnostics)
            std::cerr << "diag\t" << d.offset << "\t" << d.message << "\n";
    return 0;
}

int run_stats(const std::string& sentences_path, bool adjusted, int cap, int top) {
    auto sentences = read_sentences(sentences_path);
    FreqReport report = freq_report(sentences, adjusted, cap);
    std::cout << format_freq_report(report, top);
    return 0;
}

int run_build(const std::string& sentences_path, const std::string& out_dir, int cap) {
    auto sentences = read_sentences(sentences_path);
    Corpus corpus = build_corpus(sentences, cap);
    write_corpus_dir(out_dir, corpus);
    std::cerr << "sentences\t" << sentences.size() << "\nvocab\t" << corpus.vocab.size()
              << "\ntrain_tokens\t" << corpus.train.size() << "\nvalid_tokens\t"
              << corpus.valid.size() << "\ntest_tokens\t" << corpus.test.size() << "\n";
    return 0;
}

int run_train(const std::string& corpus_dir, const std::string& out_path,
              LstmConfig config, bool vocab_size_overridden) {
    Corpus corpus = read_corpus_dir(corpus_dir);
    if (!vocab_size_overridden) config.vocab_size = corpus.vocab.size();
    TrainResult result = train(corpus, config, [](const EpochStats& s) {
        std::fprintf(stderr, "epoch %d\tlr %.4f\ttrain_ppl %.3f\tvalid_ppl %.3f\n", s.epoch,
                     s.learning_rate, s.train_perplexity, s.valid_perplexity);
    });
    save_checkpoint(out_path, result.params, config, vocab_hash(corpus.vocab));
    std::cout << "epoch\tlearning_rate\ttrain_perplexity\tvalid_perplexity\n";
    for (const EpochStats& s : result.history) {
        std::printf("%d\t%.6g\t%.6f\t%.6f\n", s.epoch, s.learning_rate, s.train_perplexity,
                    s.valid_perplexity);
    }
    return 0;
}

int run_eval(const std::string& ckpt_path, const std::string& corpus_dir,
             const std::string& label) {
    Checkpoint ckpt = load_checkpoint(ckpt_path);
    Corpus corpus = read_corpus_dir(corpus_dir);
    if (vocab_hash(corpus.vocab) != ckpt.vocabulary_hash)
        throw Error("vocabulary hash mismatch between checkpoint and corpus dir");
    LstmScorer scorer(ckpt.params);
    EvalReport report = make_report(scorer, corpus, label);
    std::cout << format_report(report);
    return 0;
}

int run_predict(const std::string& ckpt_path, const std::string& vocab_path,
                const std::string& context, int k) {
    Checkpoint ckpt = load_checkpoint(ckpt_path);
    Vocabulary vocab = read_vocabulary(vocab_path);
    if (vocab_hash(vocab) != ckpt.vocabulary_hash)
        throw Error("vocabulary hash mismatch between checkpoint and vocabulary file");
    Sentence tokens = split_sentence(context);
    if (tokens.empty()) throw Error("empty context");
    std::vector<int> ids;
    ids.reserve(tokens.size());
    for (const Token& t : tokens) ids.push_back(vocab.encode_token(t));
    for (auto& [index, prob] : predict_next(ckpt.params, ids, k)) {
        const std::string& token =
            index < vocab.size() ? vocab.entries[index] : std::to_string(index);
        std::printf("%s\t%.8f\n", token.c_str(), prob);
    }
    return 0;
}

int run_kinds() {
    for (const NodeKind& k : node_kinds()) std::cout << k.id << "\t" << k.name << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"statement-level AST token language modeling for Java"};
    app.require_subcommand(1);

    std::string src_dir, out_path, sentences_path, corpus_dir, ckpt_path, vocab_path;
    std::string mode = "canonical";
    std::string label = "test";
    std::string context;
    bool adjusted = false;
    bool verbose = false;
    int cap = 10000;
    int top = 0;
    int k = 10;
    LstmConfig config;

    auto* tokenize = app.add_subcommand("tokenize", "tokenize a Java source tree");
    tokenize->add_option("src-dir", src_dir, "directory with .java files")->required();
    tokenize->add_option("-o,--output", out_path, "sentences file to write")->required();
    tokenize->add_option("--mode", mode, "paper-compat or canonical");
    tokenize->add_flag("-v,--verbose", verbose, "print per-method diagnostics");

    auto* stats = app.add_subcommand("stats", "frequency statistics for a sentences file");
    stats->add_option("sentences", sentences_path, "sentences file")->required();
    stats->add_flag("--adjusted", adjusted, "exclude brace tokens from the ranking");
    stats->add_option("--cap", cap, "vocabulary cap for <unk> statistics");
    stats->add_option("--top", top, "rank rows to print (0 = all)");

    auto* build = app.add_subcommand("build", "build vocab and encoded splits");
    build->add_option("sentences", sentences_path, "sentences file")->required();
    build->add_option("-o,--output", out_path, "corpus directory")->required();
    build->add_option("--cap", cap, "vocabulary cap");

    auto* train_cmd = app.add_subcommand("train", "train the LSTM on a corpus directory");
    train_cmd->add_option("corpus-dir", corpus_dir, "corpus directory")->required();
    train_cmd->add_option("-o,--output", ckpt_path, "checkpoint to write")->required();
    add_config_options(train_cmd, config);

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on a test split");
    eval_cmd->add_option("checkpoint", ckpt_path, "checkpoint file")->required();
    eval_cmd->add_option("corpus-dir", corpus_dir, "corpus directory")->required();
    eval_cmd->add_option("--label", label, "corpus label for the report");

    auto* predict = app.add_subcommand("predict", "rank next tokens for a context");
    predict->add_option("checkpoint", ckpt_path, "checkpoint file")->required();
    predict->add_option("--vocab", vocab_path, "vocabulary file")->required();
    predict->add_option("--context", context, "space-delimited context tokens")->required();
    predict->add_option("-k", k, "number of predictions");

    auto* kinds = app.add_subcommand("kinds", "print the node-id table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (tokenize->parsed()) return run_tokenize(src_dir, out_path, mode, verbose);
        if (stats->parsed()) return run_stats(sentences_path, adjusted, cap, top);
        if (build->parsed()) return run_build(sentences_path, out_path, cap);
        if (train_cmd->parsed())
            return run_train(corpus_dir, ckpt_path, config,
                             train_cmd->count("--vocab_size") > 0);
        if (eval_cmd->parsed()) return run_eval(ckpt_path, corpus_dir, label);
        if (predict->parsed()) return run_predict(ckpt_path, vocab_path, context, k);
        if (kinds->parsed()) return run_kinds();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
