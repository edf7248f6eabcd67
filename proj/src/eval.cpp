#include "astlm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "astlm/errors.hpp"

namespace astlm {

namespace {

constexpr double kProbFloor = 1e-300;

// Rank of `target` in `dist` with ties broken by ascending index: 1 + the
// number of entries that outrank it.
int rank_of(const Eigen::VectorXd& dist, int target) {
    const double p = dist(target);
    int rank = 1;
    for (int i = 0; i < dist.size(); ++i) {
        if (dist(i) > p || (dist(i) == p && i < target)) ++rank;
    }
    return rank;
}

}  // namespace

double perplexity(NextTokenModel& model, std::span<const int> sequence, int prime_token) {
    if (sequence.empty()) throw EmptySequence();
    model.reset();
    double nats = 0.0;
    int input = prime_token;
    for (int target : sequence) {
        const Eigen::VectorXd& dist = model.step(input);
        nats -= std::log(std::max(dist(target), kProbFloor));
        input = target;
    }
    return std::exp(nats / static_cast<double>(sequence.size()));
}

std::map<int, double> topk_accuracy(NextTokenModel& model, std::span<const int> sequence,
                                    const std::vector<int>& ks, int prime_token) {
    if (sequence.empty()) throw EmptySequence();
    model.reset();
    std::map<int, long long> hits;
    for (int k : ks) hits[k] = 0;
    int input = prime_token;
    for (int target : sequence) {
        const Eigen::VectorXd& dist = model.step(input);
        const int rank = rank_of(dist, target);
        for (int k : ks)
            if (rank <= k) ++hits[k];
        input = target;
    }
    std::map<int, double> out;
    for (int k : ks)
        out[k] = static_cast<double>(hits[k]) / static_cast<double>(sequence.size());
    return out;
}

EvalReport evaluate_sequence(NextTokenModel& model, std::span<const int> sequence,
                             std::string label, int prime_token) {
    if (sequence.empty()) throw EmptySequence();
    model.reset();
    double nats = 0.0;
    std::map<int, long long> hits = {{1, 0}, {5, 0}, {10, 0}};
    int input = prime_token;
    for (int target : sequence) {
        const Eigen::VectorXd& dist = model.step(input);
        nats -= std::log(std::max(dist(target), kProbFloor));
        const int rank = rank_of(dist, target);
        for (auto& [k, count] : hits)
            if (rank <= k) ++count;
        input = target;
    }
    EvalReport report;
    report.perplexity = std::exp(nats / static_cast<double>(sequence.size()));
    report.token_count = static_cast<long long>(sequence.size());
    for (auto& [k, count] : hits)
        report.topk[k] = static_cast<double>(count) / static_cast<double>(sequence.size());
    report.corpus_label = std::move(label);
    return report;
}

EvalReport make_report(NextTokenModel& model, const Corpus& corpus, std::string label) {
    return evaluate_sequence(model, corpus.test, std::move(label));
}

std::string format_report(const EvalReport& report) {
    char buf[64];
    std::string out;
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        return std::string(buf);
    };
    out += "perplexity\t" + num(report.perplexity) + "\n";
    out += "tokens\t" + std::to_string(report.token_count) + "\n";
    for (const auto& [k, acc] : report.topk)
        out += "top" + std::to_string(k) + "\t" + num(acc) + "\n";
    out += "corpus\t" + report.corpus_label + "\n";
    return out;
}

}  // namespace astlm
