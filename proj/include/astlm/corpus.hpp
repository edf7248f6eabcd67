#ifndef ASTLM_CORPUS_HPP
#define ASTLM_CORPUS_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "astlm/parser.hpp"
#include "astlm/tokenizer.hpp"

namespace astlm {

// Capped, rank-ordered vocabulary. Index 0 is <unk>, index 1 is <eos>;
// remaining entries are sorted by descending corpus frequency, ties broken
// lexicographically.
struct Vocabulary {
    static constexpr int kUnkIndex = 0;
    static constexpr int kEosIndex = 1;

    std::vector<std::string> entries;
    int cap = 10000;
    std::unordered_map<std::string, int> index;

    int size() const { return static_cast<int>(entries.size()); }

    // Index of `token`, or kUnkIndex when out of vocabulary.
    int encode_token(const std::string& token) const {
        auto it = index.find(token);
        return it == index.end() ? kUnkIndex : it->second;
    }

    void rebuild_index() {
        index.clear();
        for (int i = 0; i < size(); ++i) index.emplace(entries[i], i);
    }
};

struct SplitRatios {
    double train = 0.8;
    double valid = 0.1;
    double test = 0.1;
};

struct Corpus {
    std::vector<int> train;
    std::vector<int> valid;
    std::vector<int> test;
    Vocabulary vocab;
};

struct RankEntry {
    int rank;
    std::string token;
    double proportion;
};

struct FreqReport {
    std::vector<RankEntry> rank_frequency;  // kept (in-cap) tokens, by rank
    double brace_proportion = 0.0;          // over the unadjusted population
    double unk_proportion = 0.0;
    int unk_rank = 1;
    bool adjusted = false;
    long long total_tokens = 0;  // population after adjustment
};

struct IngestReport {
    int files = 0;
    int methods = 0;
    int skipped = 0;
    int io_errors = 0;
    std::vector<Diagnostic> diagnostics;
};

// Walks all *.java files under root in lexicographic path order, extracts and
// tokenizes every method. Unreadable files count as io_errors and do not
// abort the walk.
std::vector<Sentence> ingest_repository(const std::filesystem::path& root, EmitMode mode,
                                        IngestReport& report);

// Counts every token (plus one <eos> per sentence) and keeps the cap-2 most
// frequent after the two reserved slots. Throws EmptyCorpus.
Vocabulary build_vocabulary(std::span<const Sentence> sentences, int cap);

// Per sentence: each token's index (<unk> when out of vocabulary) followed by
// the <eos> index.
std::vector<int> encode(std::span<const Sentence> sentences, const Vocabulary& vocab);

struct SentenceSplits {
    std::vector<Sentence> train;
    std::vector<Sentence> valid;
    std::vector<Sentence> test;
};

// Contiguous split: first floor(train*n) sentences, then ceil(valid*n), rest.
SentenceSplits split_sentences(std::span<const Sentence> sentences,
                               SplitRatios ratios = {});

// Rank/proportion statistics; `adjusted` removes the brace tokens from the
// ranked population. Throws EmptyCorpus.
FreqReport freq_report(std::span<const Sentence> sentences, bool adjusted, int vocab_cap);

// Convenience: vocabulary from the train split + encoded splits.
Corpus build_corpus(std::span<const Sentence> sentences, int cap, SplitRatios ratios = {});

// --- file formats ---------------------------------------------------------

// One sentence per line, tokens space-joined, no <eos> on disk.
void write_sentences(const std::filesystem::path& path, std::span<const Sentence> sentences);
std::vector<Sentence> read_sentences(const std::filesystem::path& path);

// One token per line; the line number is the index.
void write_vocabulary(const std::filesystem::path& path, const Vocabulary& vocab);
Vocabulary read_vocabulary(const std::filesystem::path& path);

// Whitespace-separated decimal indices.
void write_indices(const std::filesystem::path& path, std::span<const int> indices);
std::vector<int> read_indices(const std::filesystem::path& path);

// vocab.txt + train.ids/valid.ids/test.ids under `dir`.
void write_corpus_dir(const std::filesystem::path& dir, const Corpus& corpus);
Corpus read_corpus_dir(const std::filesystem::path& dir);

// FNV-1a over the entry list; stored in checkpoints to pin the vocabulary.
std::uint64_t vocab_hash(const Vocabulary& vocab);

// `key<TAB>value` lines followed by a rank/proportion table.
std::string format_freq_report(const FreqReport& report, int max_rows = 0);

}  // namespace astlm

#endif  // ASTLM_CORPUS_HPP
