#ifndef ASTLM_LSTM_HPP
#define ASTLM_LSTM_HPP

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "astlm/corpus.hpp"
#include "astlm/eval.hpp"

namespace astlm {

// Hyperparameters. Defaults follow the "medium" regularized configuration:
// two layers, 650 units, 35-step unrolling, batch 20, 50% dropout, gradient
// clipping at 5, SGD from learning rate 1.0 decaying by 0.8 from epoch 7,
// uniform init in [-0.05, 0.05]. Trained for 15 epochs.
struct LstmConfig {
    int layers = 2;  // fixed; validate() rejects other values
    int hidden_size = 650;
    int vocab_size = 10000;
    int unroll_steps = 35;
    int batch_size = 20;
    double dropout_keep = 0.5;
    double max_grad_norm = 5.0;
    int epochs = 15;
    double lr_initial = 1.0;
    double lr_decay = 0.8;
    int decay_start_epoch = 7;
    double init_scale = 0.05;
    std::uint64_t seed = 1;

    void validate() const;  // throws Error on inconsistent values
};

struct LstmLayerParams {
    Eigen::MatrixXd w_in;   // 4d x d, gate row order: input, forget, output, candidate
    Eigen::MatrixXd w_rec;  // 4d x d
    Eigen::MatrixXd bias;   // 4d x 1
};

struct LstmParams {
    Eigen::MatrixXd embedding;  // V x d
    std::array<LstmLayerParams, 2> layers;
    Eigen::MatrixXd proj;       // d x V
    Eigen::MatrixXd proj_bias;  // V x 1

    int hidden_size() const { return static_cast<int>(embedding.cols()); }
    int vocab_size() const { return static_cast<int>(embedding.rows()); }
};

// Named views over every parameter tensor, in checkpoint order.
std::vector<std::pair<std::string, Eigen::MatrixXd*>> tensor_views(LstmParams& params);
std::vector<std::pair<std::string, const Eigen::MatrixXd*>> tensor_views(
    const LstmParams& params);

// Per-lane hidden and cell vectors for both layers.
struct LstmState {
    std::array<Eigen::MatrixXd, 2> h;  // d x batch
    std::array<Eigen::MatrixXd, 2> c;  // d x batch

    static LstmState zeros(int hidden_size, int batch);
};

// Weights uniform in [-init_scale, init_scale] from a generator seeded with
// config.seed; biases zero.
LstmParams init_params(const LstmConfig& config);

// Opaque activation record kept for backward().
struct ForwardCache;

struct ForwardResult {
    // logits(v, t * batch + b): pre-softmax scores for position (b, t)
    Eigen::MatrixXd logits;
    LstmState state;
};

// Runs the window. inputs(b, t) are vocabulary indices (throws
// IndexOutOfVocabulary outside [0, V)). With training=true, inverted dropout
// masks drawn from `rng` are applied to the embedding output and each layer's
// output; with training=false dropout is the identity and rng may be null.
ForwardResult forward(const LstmParams& params, const Eigen::MatrixXi& inputs,
                      const LstmState& state, bool training, double dropout_keep,
                      std::mt19937_64* rng, ForwardCache* cache = nullptr);

// Mean cross-entropy in nats over all positions: -ln softmax(logits)[target].
double loss(const Eigen::MatrixXd& logits, const Eigen::MatrixXi& targets);

// Exact gradients of loss() through the unroll window; the incoming state is
// treated as constant (truncated BPTT).
LstmParams backward(const LstmParams& params, const ForwardCache& cache,
                    const Eigen::MatrixXi& targets);

ForwardCache* new_forward_cache();
void free_forward_cache(ForwardCache*);

// RAII holder for the activation record.
class CacheHolder {
  public:
    CacheHolder() : cache_(new_forward_cache()) {}
    ~CacheHolder() { free_forward_cache(cache_); }
    CacheHolder(const CacheHolder&) = delete;
    CacheHolder& operator=(const CacheHolder&) = delete;
    ForwardCache* get() { return cache_; }

  private:
    ForwardCache* cache_;
};

double global_norm(const LstmParams& grads);

// Scales all gradients by max_norm/norm when the global L2 norm exceeds
// max_norm; returns the pre-clip norm.
double clip_global_norm(LstmParams& grads, double max_norm);

struct EpochStats {
    int epoch = 0;
    double learning_rate = 0.0;
    double train_perplexity = 0.0;
    double valid_perplexity = 0.0;  // NaN when the valid split is empty
};

using ProgressSink = std::function<void(const EpochStats&)>;

struct TrainResult {
    LstmParams params;
    std::vector<EpochStats> history;
};

// Truncated-BPTT SGD training over the corpus train split. The sequence is
// cut into batch_size parallel lanes and stepped unroll_steps at a time;
// state carries across windows and resets each epoch. Throws CorpusTooSmall
// when fewer than batch_size * (unroll_steps + 1) train tokens exist.
TrainResult train(const Corpus& corpus, const LstmConfig& config, ProgressSink sink = {});

// Step-at-a-time inference wrapper over a finished model.
class LstmScorer : public NextTokenModel {
  public:
    explicit LstmScorer(const LstmParams& params);

    int vocab_size() const override { return params_->vocab_size(); }
    void reset() override;
    const Eigen::VectorXd& step(int input_token) override;

  private:
    const LstmParams* params_;
    std::array<Eigen::VectorXd, 2> h_;
    std::array<Eigen::VectorXd, 2> c_;
    Eigen::VectorXd gates_;
    Eigen::VectorXd distribution_;
};

// Top-k next tokens after feeding `context` from zero state, as (index,
// probability) pairs in descending probability (ties by ascending index).
std::vector<std::pair<int, double>> predict_next(const LstmParams& params,
                                                 std::span<const int> context, int k);

// --- checkpoints ------------------------------------------------------------

// Binary container: magic, format version, config, vocabulary hash, then each
// tensor as (name, dims, row-major little-endian doubles). Loading rejects
// version or dimension mismatches.
void save_checkpoint(const std::filesystem::path& path, const LstmParams& params,
                     const LstmConfig& config, std::uint64_t vocabulary_hash);

struct Checkpoint {
    LstmParams params;
    LstmConfig config;
    std::uint64_t vocabulary_hash = 0;
};

Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace astlm

#endif  // ASTLM_LSTM_HPP
