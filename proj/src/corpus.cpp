#include "astlm/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "astlm/errors.hpp"
#include "astlm/parser.hpp"

namespace astlm {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path.string());
    return std::move(buf).str();
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

std::vector<Sentence> ingest_repository(const std::filesystem::path& root, EmitMode mode,
                                        IngestReport& report) {
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (std::filesystem::recursive_directory_iterator it(root, ec), end; it != end;
         it.increment(ec)) {
        if (ec) {
            ++report.io_errors;
            break;
        }
        if (it->is_regular_file(ec) && it->path().extension() == ".java")
            files.push_back(it->path());
    }
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.generic_string() < b.generic_string(); });

    std::vector<Sentence> sentences;
    for (const auto& file : files) {
        std::string source;
        try {
            source = read_file(file);
        } catch (const IoError& e) {
            ++report.io_errors;
            report.diagnostics.push_back({0, file.generic_string() + ": " + e.what()});
            continue;
        }
        ++report.files;
        ParseOutcome outcome = extract_methods(source);
        report.methods += static_cast<int>(outcome.methods.size());
        report.skipped += outcome.skipped;
        for (const Diagnostic& d : outcome.diagnostics)
            report.diagnostics.push_back({d.offset, file.generic_string() + ": " + d.message});
        for (const MethodAst& method : outcome.methods)
            sentences.push_back(tokenize_method(method, mode));
    }
    return sentences;
}

Vocabulary build_vocabulary(std::span<const Sentence> sentences, int cap) {
    if (cap < 3) throw Error("vocabulary cap must be at least 3");
    if (sentences.empty()) throw EmptyCorpus();

    std::unordered_map<std::string, long long> counts;
    for (const Sentence& sentence : sentences) {
        for (const Token& token : sentence) ++counts[token];
        ++counts[kEosToken];
    }
    counts.erase(kUnkToken);
    counts.erase(kEosToken);  // reserved; does not compete for cap slots

    std::vector<std::pair<std::string, long long>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Vocabulary vocab;
    vocab.cap = cap;
    vocab.entries = {kUnkToken, kEosToken};
    const std::size_t keep = static_cast<std::size_t>(cap - 2);
    for (std::size_t i = 0; i < ranked.size() && i < keep; ++i)
        vocab.entries.push_back(ranked[i].first);
    vocab.rebuild_index();
    return vocab;
}

std::vector<int> encode(std::span<const Sentence> sentences, const Vocabulary& vocab) {
    std::vector<int> out;
    for (const Sentence& sentence : sentences) {
        for (const Token& token : sentence) out.push_back(vocab.encode_token(token));
        out.push_back(Vocabulary::kEosIndex);
    }
    return out;
}

SentenceSplits split_sentences(std::span<const Sentence> sentences, SplitRatios ratios) {
    const auto n = static_cast<double>(sentences.size());
    auto train_n = static_cast<std::size_t>(std::floor(ratios.train * n + 1e-9));
    auto valid_n = static_cast<std::size_t>(std::ceil(ratios.valid * n - 1e-9));
    train_n = std::min(train_n, sentences.size());
    valid_n = std::min(valid_n, sentences.size() - train_n);

    SentenceSplits splits;
    splits.train.assign(sentences.begin(), sentences.begin() + train_n);
    splits.valid.assign(sentences.begin() + train_n, sentences.begin() + train_n + valid_n);
    splits.test.assign(sentences.begin() + train_n + valid_n, sentences.end());
    return splits;
}

FreqReport freq_report(std::span<const Sentence> sentences, bool adjusted, int vocab_cap) {
    if (vocab_cap < 3) throw Error("vocabulary cap must be at least 3");
    std::unordered_map<std::string, long long> counts;
    long long total_all = 0;
    long long braces = 0;
    for (const Sentence& sentence : sentences) {
        for (const Token& token : sentence) {
            if (token == kEosToken || token == kUnkToken) continue;
            ++total_all;
            if (token == "{" || token == "}") ++braces;
            ++counts[token];
        }
    }
    if (total_all == 0) throw EmptyCorpus();

    FreqReport report;
    report.adjusted = adjusted;
    report.brace_proportion = static_cast<double>(braces) / static_cast<double>(total_all);
    if (adjusted) {
        counts.erase("{");
        counts.erase("}");
    }
    long long total = adjusted ? total_all - braces : total_all;
    if (total == 0) throw EmptyCorpus();
    report.total_tokens = total;

    std::vector<std::pair<std::string, long long>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    const std::size_t keep = static_cast<std::size_t>(vocab_cap - 2);
    long long unk_mass = 0;
    for (std::size_t i = keep; i < ranked.size(); ++i) unk_mass += ranked[i].second;

    for (std::size_t i = 0; i < ranked.size() && i < keep; ++i) {
        report.rank_frequency.push_back(
            {static_cast<int>(i + 1), ranked[i].first,
             static_cast<double>(ranked[i].second) / static_cast<double>(total)});
    }
    report.unk_proportion = static_cast<double>(unk_mass) / static_cast<double>(total);
    int above = 0;
    for (std::size_t i = 0; i < ranked.size() && i < keep; ++i)
        if (ranked[i].second > unk_mass) ++above;
    report.unk_rank = above + 1;
    return report;
}

Corpus build_corpus(std::span<const Sentence> sentences, int cap, SplitRatios ratios) {
    SentenceSplits splits = split_sentences(sentences, ratios);
    Corpus corpus;
    corpus.vocab = build_vocabulary(splits.train, cap);
    corpus.train = encode(splits.train, corpus.vocab);
    corpus.valid = encode(splits.valid, corpus.vocab);
    corpus.test = encode(splits.test, corpus.vocab);
    return corpus;
}

void write_sentences(const std::filesystem::path& path, std::span<const Sentence> sentences) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    for (const Sentence& sentence : sentences) out << join_sentence(sentence) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

std::vector<Sentence> read_sentences(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<Sentence> sentences;
    std::string line;
    while (std::getline(in, line)) {
        Sentence s = split_sentence(line);
        if (!s.empty()) sentences.push_back(std::move(s));
    }
    return sentences;
}

void write_vocabulary(const std::filesystem::path& path, const Vocabulary& vocab) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    for (const std::string& token : vocab.entries) out << token << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

Vocabulary read_vocabulary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    Vocabulary vocab;
    vocab.entries.clear();
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) vocab.entries.push_back(line);
    }
    if (vocab.entries.size() < 2 || vocab.entries[0] != kUnkToken ||
        vocab.entries[1] != kEosToken)
        throw IoError("vocabulary file " + path.string() + " lacks <unk>/<eos> header");
    vocab.cap = std::max<int>(vocab.cap, vocab.size());
    vocab.rebuild_index();
    return vocab;
}

void write_indices(const std::filesystem::path& path, std::span<const int> indices) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        out << indices[i];
        out << ((indices[i] == Vocabulary::kEosIndex) ? '\n' : ' ');
    }
    out << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

std::vector<int> read_indices(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<int> indices;
    int value = 0;
    while (in >> value) indices.push_back(value);
    return indices;
}

void write_corpus_dir(const std::filesystem::path& dir, const Corpus& corpus) {
    std::filesystem::create_directories(dir);
    write_vocabulary(dir / "vocab.txt", corpus.vocab);
    write_indices(dir / "train.ids", corpus.train);
    write_indices(dir / "valid.ids", corpus.valid);
    write_indices(dir / "test.ids", corpus.test);
}

Corpus read_corpus_dir(const std::filesystem::path& dir) {
    Corpus corpus;
    corpus.vocab = read_vocabulary(dir / "vocab.txt");
    corpus.train = read_indices(dir / "train.ids");
    corpus.valid = read_indices(dir / "valid.ids");
    corpus.test = read_indices(dir / "test.ids");
    for (const auto* split : {&corpus.train, &corpus.valid, &corpus.test})
        for (int idx : *split)
            if (idx < 0 || idx >= corpus.vocab.size())
                throw IoError("corpus index outside vocabulary in " + dir.string());
    return corpus;
}

std::uint64_t vocab_hash(const Vocabulary& vocab) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    auto mix = [&h](char c) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    };
    for (const std::string& token : vocab.entries) {
        for (char c : token) mix(c);
        mix('\n');
    }
    return h;
}

std::string format_freq_report(const FreqReport& report, int max_rows) {
    std::string out;
    out += "adjusted\t" + std::string(report.adjusted ? "1" : "0") + "\n";
    out += "tokens\t" + std::to_string(report.total_tokens) + "\n";
    out += "brace_proportion\t" + format_double(report.brace_proportion) + "\n";
    out += "unk_proportion\t" + format_double(report.unk_proportion) + "\n";
    out += "unk_rank\t" + std::to_string(report.unk_rank) + "\n";
    out += "rank\ttoken\tproportion\n";
    int rows = 0;
    for (const RankEntry& entry : report.rank_frequency) {
        if (max_rows > 0 && rows >= max_rows) break;
        out += std::to_string(entry.rank) + "\t" + entry.token + "\t" +
               format_double(entry.proportion) + "\n";
        ++rows;
    }
    return out;
}

}  // namespace astlm
