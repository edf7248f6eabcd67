#include "astlm/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "astlm/errors.hpp"

namespace astlm {

namespace {

// [0, 1) from the top 53 bits; identical across platforms for a given seed.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

void check_indices(const Eigen::MatrixXi& inputs, int vocab) {
    for (Eigen::Index i = 0; i < inputs.size(); ++i) {
        int v = inputs.data()[i];
        if (v < 0 || v >= vocab) throw IndexOutOfVocabulary(v);
    }
}

Eigen::MatrixXd scaled_dropout_mask(Eigen::Index rows, Eigen::Index cols, double keep,
                                    std::mt19937_64& rng) {
    Eigen::MatrixXd mask(rows, cols);
    const double inv = 1.0 / keep;
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
            mask(r, c) = uniform01(rng) < keep ? inv : 0.0;
    return mask;
}

void stable_softmax_inplace(Eigen::MatrixXd& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        auto col = m.col(c);
        col.array() -= col.maxCoeff();
        col = col.array().exp();
        col /= col.sum();
    }
}

}  // namespace

void LstmConfig::validate() const {
    if (layers != 2) throw Error("config: layers must be 2");
    if (hidden_size <= 0) throw Error("config: hidden_size must be positive");
    if (vocab_size <= 0) throw Error("config: vocab_size must be positive");
    if (unroll_steps <= 0) throw Error("config: unroll_steps must be positive");
    if (batch_size <= 0) throw Error("config: batch_size must be positive");
    if (!(dropout_keep > 0.0 && dropout_keep <= 1.0))
        throw Error("config: dropout_keep must be in (0, 1]");
    if (max_grad_norm <= 0.0) throw Error("config: max_grad_norm must be positive");
    if (epochs < 1) throw Error("config: epochs must be at least 1");
    if (lr_initial <= 0.0) throw Error("config: lr_initial must be positive");
    if (!(lr_decay > 0.0 && lr_decay <= 1.0)) throw Error("config: lr_decay must be in (0, 1]");
    if (decay_start_epoch < 1) throw Error("config: decay_start_epoch must be at least 1");
    if (init_scale < 0.0) throw Error("config: init_scale must be non-negative");
}

std::vector<std::pair<std::string, Eigen::MatrixXd*>> tensor_views(LstmParams& p) {
    return {
        {"embedding", &p.embedding},
        {"l0.w_in", &p.layers[0].w_in},
        {"l0.w_rec", &p.layers[0].w_rec},
        {"l0.bias", &p.layers[0].bias},
        {"l1.w_in", &p.layers[1].w_in},
        {"l1.w_rec", &p.layers[1].w_rec},
        {"l1.bias", &p.layers[1].bias},
        {"proj", &p.proj},
        {"proj_bias", &p.proj_bias},
    };
}

std::vector<std::pair<std::string, const Eigen::MatrixXd*>> tensor_views(const LstmParams& p) {
    auto views = tensor_views(const_cast<LstmParams&>(p));
    std::vector<std::pair<std::string, const Eigen::MatrixXd*>> out;
    out.reserve(views.size());
    for (auto& [name, tensor] : views) out.emplace_back(name, tensor);
    return out;
}

LstmState LstmState::zeros(int hidden_size, int batch) {
    LstmState s;
    for (int l = 0; l < 2; ++l) {
        s.h[l] = Eigen::MatrixXd::Zero(hidden_size, batch);
        s.c[l] = Eigen::MatrixXd::Zero(hidden_size, batch);
    }
    return s;
}

LstmParams init_params(const LstmConfig& config) {
    config.validate();
    const int d = config.hidden_size;
    const int v = config.vocab_size;

    LstmParams p;
    p.embedding.resize(v, d);
    for (int l = 0; l < 2; ++l) {
        p.layers[l].w_in.resize(4 * d, d);
        p.layers[l].w_rec.resize(4 * d, d);
        p.layers[l].bias = Eigen::MatrixXd::Zero(4 * d, 1);
    }
    p.proj.resize(d, v);
    p.proj_bias = Eigen::MatrixXd::Zero(v, 1);

    std::mt19937_64 rng(config.seed);
    const double s = config.init_scale;
    // weights filled row-major so the draw order is part of the format
    for (Eigen::MatrixXd* w :
         {&p.embedding, &p.layers[0].w_in, &p.layers[0].w_rec, &p.layers[1].w_in,
          &p.layers[1].w_rec, &p.proj}) {
        for (Eigen::Index r = 0; r < w->rows(); ++r)
            for (Eigen::Index c = 0; c < w->cols(); ++c)
                (*w)(r, c) = (uniform01(rng) * 2.0 - 1.0) * s;
    }
    return p;
}

struct LayerCache {
    Eigen::MatrixXd x;       // d x BT, input after dropout
    Eigen::MatrixXd acts;    // 4d x BT, activated gates (i, f, o, g)
    Eigen::MatrixXd c;       // d x BT
    Eigen::MatrixXd tanh_c;  // d x BT
    Eigen::MatrixXd h;       // d x BT
};

struct ForwardCache {
    int batch = 0;
    int steps = 0;
    bool training = false;
    double keep = 1.0;
    Eigen::MatrixXi inputs;
    LstmState state0;
    std::array<LayerCache, 2> layers;
    Eigen::MatrixXd emb_mask;                    // scaled; empty when unused
    std::array<Eigen::MatrixXd, 2> output_mask;  // [0]: between layers, [1]: before proj
    Eigen::MatrixXd top;                         // d x BT, input to the projection
    Eigen::MatrixXd logits;                      // V x BT
};

ForwardCache* new_forward_cache() { return new ForwardCache(); }
void free_forward_cache(ForwardCache* cache) { delete cache; }

ForwardResult forward(const LstmParams& params, const Eigen::MatrixXi& inputs,
                      const LstmState& state, bool training, double dropout_keep,
                      std::mt19937_64* rng, ForwardCache* cache) {
    const int d = params.hidden_size();
    const int v = params.vocab_size();
    const int batch = static_cast<int>(inputs.rows());
    const int steps = static_cast<int>(inputs.cols());
    const int bt = batch * steps;
    check_indices(inputs, v);
    if (state.h[0].rows() != d || state.h[0].cols() != batch)
        throw Error("forward: state shape disagrees with params/batch");

    const bool drop = training && dropout_keep < 1.0;
    if (drop && rng == nullptr) throw Error("forward: training dropout needs a generator");

    ForwardCache local;
    ForwardCache& cc = cache ? *cache : local;
    cc.batch = batch;
    cc.steps = steps;
    cc.training = drop;
    cc.keep = dropout_keep;
    cc.inputs = inputs;
    cc.state0 = state;

    // embedding lookup, columns ordered (t * batch + b)
    Eigen::MatrixXd x(d, bt);
    for (int t = 0; t < steps; ++t)
        for (int b = 0; b < batch; ++b)
            x.col(t * batch + b) = params.embedding.row(inputs(b, t)).transpose();
    if (drop) {
        cc.emb_mask = scaled_dropout_mask(d, bt, dropout_keep, *rng);
        x.array() *= cc.emb_mask.array();
    }

    LstmState out_state = LstmState::zeros(d, batch);
    for (int l = 0; l < 2; ++l) {
        LayerCache& lc = cc.layers[l];
        lc.x = std::move(x);
        const LstmLayerParams& lp = params.layers[l];

        Eigen::MatrixXd gates_in = lp.w_in * lc.x;  // 4d x BT
        gates_in.colwise() += lp.bias.col(0);

        lc.acts.resize(4 * d, bt);
        lc.c.resize(d, bt);
        lc.tanh_c.resize(d, bt);
        lc.h.resize(d, bt);

        for (int t = 0; t < steps; ++t) {
            Eigen::Ref<const Eigen::MatrixXd> h_prev =
                t == 0 ? Eigen::Ref<const Eigen::MatrixXd>(state.h[l])
                       : Eigen::Ref<const Eigen::MatrixXd>(
                             lc.h.middleCols((t - 1) * batch, batch));
            Eigen::Ref<const Eigen::MatrixXd> c_prev =
                t == 0 ? Eigen::Ref<const Eigen::MatrixXd>(state.c[l])
                       : Eigen::Ref<const Eigen::MatrixXd>(
                             lc.c.middleCols((t - 1) * batch, batch));
            Eigen::MatrixXd g = gates_in.middleCols(t * batch, batch) + lp.w_rec * h_prev;

            auto acts = lc.acts.middleCols(t * batch, batch);
            acts.topRows(3 * d) =
                (1.0 + (-g.topRows(3 * d).array()).exp()).inverse().matrix();  // sigmoid
            acts.bottomRows(d) = g.bottomRows(d).array().tanh().matrix();

            auto i_gate = acts.middleRows(0, d);
            auto f_gate = acts.middleRows(d, d);
            auto o_gate = acts.middleRows(2 * d, d);
            auto g_gate = acts.middleRows(3 * d, d);

            auto c_t = lc.c.middleCols(t * batch, batch);
            c_t = (f_gate.array() * c_prev.array() + i_gate.array() * g_gate.array()).matrix();
            auto tanh_c = lc.tanh_c.middleCols(t * batch, batch);
            tanh_c = c_t.array().tanh().matrix();
            lc.h.middleCols(t * batch, batch) = (o_gate.array() * tanh_c.array()).matrix();
        }

        out_state.h[l] = lc.h.rightCols(batch);
        out_state.c[l] = lc.c.rightCols(batch);

        x = lc.h;
        if (drop) {
            cc.output_mask[l] = scaled_dropout_mask(d, bt, dropout_keep, *rng);
            x.array() *= cc.output_mask[l].array();
        }
    }

    cc.top = std::move(x);
    ForwardResult result;
    result.logits = params.proj.transpose() * cc.top;  // V x BT
    result.logits.colwise() += params.proj_bias.col(0);
    result.state = std::move(out_state);
    if (cache) cc.logits = result.logits;
    return result;
}

double loss(const Eigen::MatrixXd& logits, const Eigen::MatrixXi& targets) {
    const int batch = static_cast<int>(targets.rows());
    const int steps = static_cast<int>(targets.cols());
    if (logits.cols() != static_cast<Eigen::Index>(batch) * steps)
        throw Error("loss: logits and targets disagree on position count");
    check_indices(targets, static_cast<int>(logits.rows()));

    double total = 0.0;
    for (int t = 0; t < steps; ++t) {
        for (int b = 0; b < batch; ++b) {
            auto col = logits.col(t * batch + b);
            const double m = col.maxCoeff();
            const double lse = m + std::log((col.array() - m).exp().sum());
            total += lse - col(targets(b, t));
        }
    }
    return total / (static_cast<double>(batch) * steps);
}

LstmParams backward(const LstmParams& params, const ForwardCache& cache,
                    const Eigen::MatrixXi& targets) {
    const int d = params.hidden_size();
    const int v = params.vocab_size();
    const int batch = cache.batch;
    const int steps = cache.steps;
    const int bt = batch * steps;
    check_indices(targets, v);

    LstmParams grads;
    grads.embedding = Eigen::MatrixXd::Zero(v, d);
    for (int l = 0; l < 2; ++l) {
        grads.layers[l].w_in = Eigen::MatrixXd::Zero(4 * d, d);
        grads.layers[l].w_rec = Eigen::MatrixXd::Zero(4 * d, d);
        grads.layers[l].bias = Eigen::MatrixXd::Zero(4 * d, 1);
    }
    grads.proj = Eigen::MatrixXd::Zero(d, v);
    grads.proj_bias = Eigen::MatrixXd::Zero(v, 1);

    // d(mean cross-entropy)/d(logits) = (softmax - onehot) / positions
    Eigen::MatrixXd dlogits = cache.logits;
    stable_softmax_inplace(dlogits);
    for (int t = 0; t < steps; ++t)
        for (int b = 0; b < batch; ++b) dlogits(targets(b, t), t * batch + b) -= 1.0;
    dlogits /= static_cast<double>(bt);

    grads.proj_bias.col(0) = dlogits.rowwise().sum();
    grads.proj = cache.top * dlogits.transpose();
    Eigen::MatrixXd dtop = params.proj * dlogits;  // d x BT
    if (cache.training) dtop.array() *= cache.output_mask[1].array();

    Eigen::MatrixXd dh_above = std::move(dtop);  // dL/dH of the current layer
    for (int l = 1; l >= 0; --l) {
        const LayerCache& lc = cache.layers[l];
        const LstmLayerParams& lp = params.layers[l];

        Eigen::MatrixXd dgates(4 * d, bt);
        Eigen::MatrixXd dh_carry = Eigen::MatrixXd::Zero(d, batch);
        Eigen::MatrixXd dc_carry = Eigen::MatrixXd::Zero(d, batch);

        for (int t = steps - 1; t >= 0; --t) {
            auto acts = lc.acts.middleCols(t * batch, batch);
            auto i_gate = acts.middleRows(0, d).array();
            auto f_gate = acts.middleRows(d, d).array();
            auto o_gate = acts.middleRows(2 * d, d).array();
            auto g_gate = acts.middleRows(3 * d, d).array();
            auto tanh_c = lc.tanh_c.middleCols(t * batch, batch).array();
            Eigen::Ref<const Eigen::MatrixXd> c_prev_mat =
                t == 0 ? Eigen::Ref<const Eigen::MatrixXd>(cache.state0.c[l])
                       : Eigen::Ref<const Eigen::MatrixXd>(
                             lc.c.middleCols((t - 1) * batch, batch));
            auto c_prev = c_prev_mat.array();

            Eigen::ArrayXXd dh = dh_above.middleCols(t * batch, batch).array() + dh_carry.array();
            Eigen::ArrayXXd dc =
                dc_carry.array() + dh * o_gate * (1.0 - tanh_c.square());
            Eigen::ArrayXXd do_ = dh * tanh_c;

            auto dg = dgates.middleCols(t * batch, batch);
            dg.middleRows(0, d) = (dc * g_gate * i_gate * (1.0 - i_gate)).matrix();      // input
            dg.middleRows(d, d) = (dc * c_prev * f_gate * (1.0 - f_gate)).matrix();      // forget
            dg.middleRows(2 * d, d) = (do_ * o_gate * (1.0 - o_gate)).matrix();          // output
            dg.middleRows(3 * d, d) = (dc * i_gate * (1.0 - g_gate.square())).matrix();  // candidate

            dc_carry = (dc * f_gate).matrix();
            dh_carry = lp.w_rec.transpose() * dg;
        }

        // h_prev columns: initial state followed by h shifted one step
        Eigen::MatrixXd h_prev(d, bt);
        h_prev.leftCols(batch) = cache.state0.h[l].leftCols(batch);
        if (steps > 1) h_prev.rightCols(bt - batch) = lc.h.leftCols(bt - batch);

        grads.layers[l].w_in = dgates * lc.x.transpose();
        grads.layers[l].w_rec = dgates * h_prev.transpose();
        grads.layers[l].bias.col(0) = dgates.rowwise().sum();

        dh_above = lp.w_in.transpose() * dgates;  // dL/dX of this layer
        if (l == 1 && cache.training) dh_above.array() *= cache.output_mask[0].array();
    }

    if (cache.training) dh_above.array() *= cache.emb_mask.array();
    for (int t = 0; t < steps; ++t)
        for (int b = 0; b < batch; ++b)
            grads.embedding.row(cache.inputs(b, t)) +=
                dh_above.col(t * batch + b).transpose();
    return grads;
}

double global_norm(const LstmParams& grads) {
    double sq = 0.0;
    for (auto& [name, tensor] : tensor_views(grads)) sq += tensor->squaredNorm();
    return std::sqrt(sq);
}

double clip_global_norm(LstmParams& grads, double max_norm) {
    if (max_norm <= 0.0) throw Error("clip_global_norm: max_norm must be positive");
    const double norm = global_norm(grads);
    if (norm > max_norm) {
        const double scale = max_norm / norm;
        for (auto& [name, tensor] : tensor_views(grads)) *tensor *= scale;
    }
    return norm;
}

TrainResult train(const Corpus& corpus, const LstmConfig& config, ProgressSink sink) {
    config.validate();
    if (corpus.vocab.size() > config.vocab_size)
        throw Error("train: corpus vocabulary exceeds config.vocab_size");

    const int batch = config.batch_size;
    const int unroll = config.unroll_steps;
    const auto n = static_cast<long long>(corpus.train.size());
    if (n < static_cast<long long>(batch) * (unroll + 1))
        throw CorpusTooSmall("need at least batch_size*(unroll_steps+1) = " +
                             std::to_string(static_cast<long long>(batch) * (unroll + 1)) +
                             " train tokens, have " + std::to_string(n));

    const long long lane_len = n / batch;
    Eigen::MatrixXi lanes(batch, lane_len);
    for (int b = 0; b < batch; ++b)
        for (long long i = 0; i < lane_len; ++i)
            lanes(b, i) = corpus.train[static_cast<std::size_t>(b * lane_len + i)];
    const long long windows = (lane_len - 1) / unroll;

    TrainResult result;
    result.params = init_params(config);
    std::mt19937_64 dropout_rng(config.seed ^ 0x9e3779b97f4a7c15ull);
    CacheHolder cache;

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        const int decayed = std::max(0, epoch - (config.decay_start_epoch - 1));
        const double lr = config.lr_initial * std::pow(config.lr_decay, decayed);

        LstmState state = LstmState::zeros(config.hidden_size, batch);
        double nats = 0.0;
        long long positions = 0;

        for (long long w = 0; w < windows; ++w) {
            const long long off = w * unroll;
            Eigen::MatrixXi inputs = lanes.middleCols(off, unroll);
            Eigen::MatrixXi window_targets = lanes.middleCols(off + 1, unroll);

            ForwardResult fwd = forward(result.params, inputs, state, true,
                                        config.dropout_keep, &dropout_rng, cache.get());
            nats += loss(fwd.logits, window_targets) * batch * unroll;
            positions += static_cast<long long>(batch) * unroll;

            LstmParams grads = backward(result.params, *cache.get(), window_targets);
            clip_global_norm(grads, config.max_grad_norm);

            auto pviews = tensor_views(result.params);
            auto gviews = tensor_views(grads);
            for (std::size_t i = 0; i < pviews.size(); ++i)
                *pviews[i].second -= lr * (*gviews[i].second);

            state = std::move(fwd.state);
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.learning_rate = lr;
        stats.train_perplexity = std::exp(nats / static_cast<double>(positions));
        if (corpus.valid.empty()) {
            stats.valid_perplexity = std::numeric_limits<double>::quiet_NaN();
        } else {
            LstmScorer scorer(result.params);
            stats.valid_perplexity = perplexity(scorer, corpus.valid);
        }
        result.history.push_back(stats);
        if (sink) sink(stats);
    }
    return result;
}

LstmScorer::LstmScorer(const LstmParams& params) : params_(&params) { reset(); }

void LstmScorer::reset() {
    const int d = params_->hidden_size();
    for (int l = 0; l < 2; ++l) {
        h_[l] = Eigen::VectorXd::Zero(d);
        c_[l] = Eigen::VectorXd::Zero(d);
    }
    gates_.resize(4 * d);
    distribution_.resize(params_->vocab_size());
}

const Eigen::VectorXd& LstmScorer::step(int input_token) {
    const int d = params_->hidden_size();
    if (input_token < 0 || input_token >= params_->vocab_size())
        throw IndexOutOfVocabulary(input_token);

    Eigen::VectorXd x = params_->embedding.row(input_token).transpose();
    for (int l = 0; l < 2; ++l) {
        const LstmLayerParams& lp = params_->layers[l];
        gates_ = lp.w_in * x + lp.w_rec * h_[l] + lp.bias.col(0);
        auto i_gate = (1.0 + (-gates_.segment(0, d).array()).exp()).inverse();
        auto f_gate = (1.0 + (-gates_.segment(d, d).array()).exp()).inverse();
        auto o_gate = (1.0 + (-gates_.segment(2 * d, d).array()).exp()).inverse();
        auto g_gate = gates_.segment(3 * d, d).array().tanh();
        c_[l] = (f_gate * c_[l].array() + i_gate * g_gate).matrix();
        h_[l] = (o_gate * c_[l].array().tanh()).matrix();
        x = h_[l];
    }
    distribution_ = params_->proj.transpose() * x + params_->proj_bias.col(0);
    distribution_.array() -= distribution_.maxCoeff();
    distribution_ = distribution_.array().exp();
    distribution_ /= distribution_.sum();
    return distribution_;
}

std::vector<std::pair<int, double>> predict_next(const LstmParams& params,
                                                 std::span<const int> context, int k) {
    if (context.empty()) throw EmptySequence();
    const int v = params.vocab_size();
    if (k < 1 || k > v) throw Error("predict_next: k must be in [1, vocab_size]");

    LstmScorer scorer(params);
    const Eigen::VectorXd* dist = nullptr;
    for (int token : context) dist = &scorer.step(token);

    std::vector<int> order(v);
    for (int i = 0; i < v; ++i) order[i] = i;
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](int a, int b) {
                          double pa = (*dist)(a), pb = (*dist)(b);
                          if (pa != pb) return pa > pb;
                          return a < b;
                      });
    std::vector<std::pair<int, double>> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) out.emplace_back(order[i], (*dist)(order[i]));
    return out;
}

}  // namespace astlm
