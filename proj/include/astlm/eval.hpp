#ifndef ASTLM_EVAL_HPP
#define ASTLM_EVAL_HPP

#include <Eigen/Core>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "astlm/corpus.hpp"

namespace astlm {

// A stateful next-token scorer. step() consumes one input token and returns
// the model's distribution over the following token.
class NextTokenModel {
  public:
    virtual ~NextTokenModel() = default;
    virtual int vocab_size() const = 0;
    virtual void reset() = 0;
    virtual const Eigen::VectorXd& step(int input_token) = 0;
};

// exp of the mean natural-log cross-entropy over the sequence. Every position
// is scored: the walk is primed with `prime_token` (the <eos> index, marking
// the boundary before the first token) and state is carried through the whole
// sequence. Throws EmptySequence.
double perplexity(NextTokenModel& model, std::span<const int> sequence,
                  int prime_token = Vocabulary::kEosIndex);

// Fraction of positions whose target ranks within the top k (ties broken by
// ascending index), for each requested k.
std::map<int, double> topk_accuracy(NextTokenModel& model, std::span<const int> sequence,
                                    const std::vector<int>& ks = {1, 5, 10},
                                    int prime_token = Vocabulary::kEosIndex);

struct EvalReport {
    double perplexity = 0.0;
    long long token_count = 0;
    std::map<int, double> topk;
    std::string corpus_label;
};

// Perplexity and top-{1,5,10} accuracy over the corpus test split, computed
// in a single pass.
EvalReport make_report(NextTokenModel& model, const Corpus& corpus, std::string label);

// Same metrics over an arbitrary sequence.
EvalReport evaluate_sequence(NextTokenModel& model, std::span<const int> sequence,
                             std::string label, int prime_token = Vocabulary::kEosIndex);

// Line-oriented `key<TAB>value` rendering.
std::string format_report(const EvalReport& report);

}  // namespace astlm

#endif  // ASTLM_EVAL_HPP
