#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "astlm/corpus.hpp"
#include "astlm/errors.hpp"
#include "test_util.hpp"

using namespace astlm;
namespace fs = std::filesystem;
namespace tu = astlm::testutil;

namespace {

std::vector<Sentence> lines(std::initializer_list<const char*> texts) {
    std::vector<Sentence> out;
    for (const char* t : texts) out.push_back(split_sentence(t));
    return out;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("astlm_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    void write(const std::string& rel, const std::string& content) const {
        fs::path p = path / rel;
        fs::create_directories(p.parent_path());
        std::ofstream out(p, std::ios::binary);
        out << content;
    }
};

const char* kFooJava = R"(
class Holder {
    int foo() {
        int x = obj.getInt();
        if (x > 0) {
            x = x + 5;
        }
        return x;
    }
}
)";

}  // namespace

TEST_CASE("vocabulary keeps everything under a loose cap") {
    Vocabulary v = build_vocabulary(lines({"a a b"}), 4);
    REQUIRE(v.entries.size() == 4);
    CHECK(v.entries[0] == "<unk>");
    CHECK(v.entries[1] == "<eos>");
    CHECK(v.entries[2] == "a");
    CHECK(v.entries[3] == "b");
}

TEST_CASE("vocabulary drops the rarest tokens at the cap") {
    Vocabulary v = build_vocabulary(lines({"a a b c"}), 3);
    REQUIRE(v.entries.size() == 3);
    CHECK(v.entries[2] == "a");
    CHECK(v.encode_token("b") == Vocabulary::kUnkIndex);
    CHECK(v.encode_token("c") == Vocabulary::kUnkIndex);
}

TEST_CASE("vocabulary ties break lexicographically") {
    Vocabulary v = build_vocabulary(lines({"bb aa cc"}), 4);
    CHECK(v.entries[2] == "aa");
    CHECK(v.entries[3] == "bb");
}

TEST_CASE("vocabulary errors") {
    CHECK_THROWS_AS(build_vocabulary({}, 10), EmptyCorpus);
    CHECK_THROWS_AS(build_vocabulary(lines({"a"}), 2), Error);
}

TEST_CASE("token to index and back is the identity") {
    Vocabulary v = build_vocabulary(lines({"a a b c <x> _60(_39)"}), 100);
    for (int i = 0; i < v.size(); ++i) CHECK(v.encode_token(v.entries[i]) == i);
}

TEST_CASE("encode appends <eos> per sentence and maps OOV to <unk>") {
    Vocabulary v;
    v.entries = {"<unk>", "<eos>", "a"};
    v.rebuild_index();
    CHECK(encode(lines({"a b"}), v) == std::vector<int>{2, 0, 1});
    CHECK(encode({}, v).empty());
    CHECK(encode(lines({"a", "a"}), v) == std::vector<int>{2, 1, 2, 1});
}

TEST_CASE("contiguous splits follow the floor/ceil rule") {
    auto mk = [](int n) {
        std::vector<Sentence> s;
        for (int i = 0; i < n; ++i) s.push_back({std::to_string(i)});
        return s;
    };
    auto s10 = split_sentences(mk(10));
    CHECK(s10.train.size() == 8);
    CHECK(s10.valid.size() == 1);
    CHECK(s10.test.size() == 1);
    CHECK(s10.train[0][0] == "0");
    CHECK(s10.test[0][0] == "9");

    auto s0 = split_sentences(mk(0));
    CHECK(s0.train.empty());
    CHECK(s0.valid.empty());
    CHECK(s0.test.empty());

    auto s7 = split_sentences(mk(7));
    CHECK(s7.train.size() == 5);
    CHECK(s7.valid.size() == 1);
    CHECK(s7.test.size() == 1);
}

TEST_CASE("freq report on a tiny corpus") {
    FreqReport r = freq_report(lines({"x x y"}), false, 10000);
    REQUIRE(r.rank_frequency.size() == 2);
    CHECK(r.rank_frequency[0].token == "x");
    CHECK(r.rank_frequency[0].proportion == doctest::Approx(2.0 / 3.0));
    CHECK(r.rank_frequency[1].proportion == doctest::Approx(1.0 / 3.0));
    CHECK(r.unk_proportion == 0.0);
    CHECK(r.brace_proportion == 0.0);
    CHECK_THROWS_AS(freq_report({}, false, 100), EmptyCorpus);
}

TEST_CASE("adjusted reports remove braces but keep the brace proportion") {
    auto sentences = lines({"{ a a { } }", "{ b }"});
    FreqReport adjusted = freq_report(sentences, true, 10000);
    CHECK(adjusted.brace_proportion == doctest::Approx(6.0 / 9.0));
    for (const RankEntry& e : adjusted.rank_frequency) {
        CHECK(e.token != "{");
        CHECK(e.token != "}");
    }
    CHECK(adjusted.total_tokens == 3);
    FreqReport raw = freq_report(sentences, false, 10000);
    CHECK(raw.rank_frequency[0].token == "{");
    CHECK(raw.total_tokens == 9);
}

TEST_CASE("listed proportions plus unk mass sum to one") {
    std::mt19937_64 rng(5);
    std::vector<Sentence> sentences;
    for (int i = 0; i < 50; ++i) {
        Sentence s;
        int len = 1 + static_cast<int>(rng() % 20);
        for (int j = 0; j < len; ++j) s.push_back("t" + std::to_string(rng() % 40));
        sentences.push_back(s);
    }
    for (int cap : {3, 5, 10, 30, 100}) {
        FreqReport r = freq_report(sentences, false, cap);
        double sum = r.unk_proportion;
        for (const RankEntry& e : r.rank_frequency) sum += e.proportion;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("unk proportion is non-increasing in the cap") {
    std::mt19937_64 rng(9);
    std::vector<Sentence> sentences;
    for (int i = 0; i < 80; ++i) {
        Sentence s;
        int len = 1 + static_cast<int>(rng() % 15);
        for (int j = 0; j < len; ++j) s.push_back("w" + std::to_string(rng() % 200));
        sentences.push_back(s);
    }
    double prev = 1.0;
    for (int cap : {3, 4, 8, 16, 32, 64, 128, 256}) {
        FreqReport r = freq_report(sentences, true, cap);
        CHECK(r.unk_proportion <= prev + 1e-12);
        prev = r.unk_proportion;
    }
}

TEST_CASE("unk rank counts strictly heavier tokens") {
    // six tokens of mass 10,8,1,1,1,1; cap keeps two -> unk mass 4, rank 3
    std::vector<Sentence> sentences;
    Sentence s;
    for (int i = 0; i < 10; ++i) s.push_back("heavy");
    for (int i = 0; i < 8; ++i) s.push_back("mid");
    for (const char* t : {"r1", "r2", "r3", "r4"}) s.push_back(t);
    sentences.push_back(s);
    FreqReport r = freq_report(sentences, false, 4);
    CHECK(r.unk_proportion == doctest::Approx(4.0 / 22.0));
    CHECK(r.unk_rank == 3);
}

TEST_CASE("ingesting the worked example reproduces the paper sentence") {
    TempDir dir;
    dir.write("Holder.java", kFooJava);
    IngestReport report;
    auto sentences = ingest_repository(dir.path, EmitMode::paper_compat, report);
    CHECK(report.files == 1);
    CHECK(report.methods == 1);
    CHECK(report.skipped == 0);
    REQUIRE(sentences.size() == 1);
    CHECK(join_sentence(sentences[0]) == tu::kFooCompatSentence);
}

TEST_CASE("empty directory ingests to nothing") {
    TempDir dir;
    IngestReport report;
    auto sentences = ingest_repository(dir.path, EmitMode::canonical, report);
    CHECK(sentences.empty());
    CHECK(report.files == 0);
}

TEST_CASE("parse failures are counted, not fatal") {
    TempDir dir;
    dir.write("Bad.java", "class A { void f() { x -> y; } }");
    IngestReport report;
    auto sentences = ingest_repository(dir.path, EmitMode::canonical, report);
    CHECK(sentences.empty());
    CHECK(report.skipped >= 1);
    CHECK(!report.diagnostics.empty());
}

TEST_CASE("ingestion is deterministic and ordered by path") {
    TempDir dir;
    dir.write("b/Second.java", "class B { int g() { return 2; } }");
    dir.write("a/First.java", "class A { int f() { return 1; } }");
    IngestReport r1, r2;
    auto s1 = ingest_repository(dir.path, EmitMode::canonical, r1);
    auto s2 = ingest_repository(dir.path, EmitMode::canonical, r2);
    CHECK(s1 == s2);
    REQUIRE(s1.size() == 2);
    CHECK(r1.files == 2);
}

TEST_CASE("sentence and vocabulary files round trip") {
    TempDir dir;
    auto sentences = lines({"_31(_39_42) { }", "a b c"});
    write_sentences(dir.path / "s.txt", sentences);
    CHECK(read_sentences(dir.path / "s.txt") == sentences);

    Vocabulary v = build_vocabulary(sentences, 50);
    write_vocabulary(dir.path / "vocab.txt", v);
    Vocabulary back = read_vocabulary(dir.path / "vocab.txt");
    CHECK(back.entries == v.entries);
    CHECK(vocab_hash(back) == vocab_hash(v));

    std::vector<int> ids = encode(sentences, v);
    write_indices(dir.path / "x.ids", ids);
    CHECK(read_indices(dir.path / "x.ids") == ids);
}

TEST_CASE("corpus directory round trip") {
    TempDir dir;
    std::vector<Sentence> sentences;
    for (int i = 0; i < 20; ++i) sentences.push_back({"t" + std::to_string(i % 7), "x"});
    Corpus corpus = build_corpus(sentences, 100);
    write_corpus_dir(dir.path / "corpus", corpus);
    Corpus back = read_corpus_dir(dir.path / "corpus");
    CHECK(back.vocab.entries == corpus.vocab.entries);
    CHECK(back.train == corpus.train);
    CHECK(back.valid == corpus.valid);
    CHECK(back.test == corpus.test);
}

TEST_CASE("freq report formatting is tab separated") {
    FreqReport r = freq_report(lines({"x x y"}), false, 100);
    std::string text = format_freq_report(r);
    CHECK(text.find("brace_proportion\t0\n") != std::string::npos);
    CHECK(text.find("1\tx\t") != std::string::npos);
    CHECK(text.find("unk_rank\t") != std::string::npos);
}
