#include <array>
#include <cstring>
#include <fstream>

#include "astlm/errors.hpp"
#include "astlm/lstm.hpp"

namespace astlm {

namespace {

constexpr char kMagic[8] = {'A', 'S', 'T', 'L', 'M', 'C', 'P', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_le(std::ostream& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    out.write(buf, sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
    char buf[sizeof(T)];
    in.read(buf, sizeof(T));
    if (!in) throw CheckpointError("truncated file");
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
}

void write_tensor(std::ostream& out, const std::string& name, const Eigen::MatrixXd& m) {
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_le<std::uint32_t>(out, 2);
    write_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
    write_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) write_le<double>(out, m(r, c));
}

void read_tensor(std::istream& in, const std::string& expected_name, Eigen::MatrixXd& m) {
    const auto name_len = read_le<std::uint32_t>(in);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    if (!in || name != expected_name)
        throw CheckpointError("expected tensor '" + expected_name + "', found '" + name + "'");
    if (read_le<std::uint32_t>(in) != 2) throw CheckpointError("tensor rank must be 2");
    const auto rows = read_le<std::uint64_t>(in);
    const auto cols = read_le<std::uint64_t>(in);
    if (rows != static_cast<std::uint64_t>(m.rows()) ||
        cols != static_cast<std::uint64_t>(m.cols()))
        throw CheckpointError("dimension mismatch for tensor '" + name + "'");
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = read_le<double>(in);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const LstmParams& params,
                     const LstmConfig& config, std::uint64_t vocabulary_hash) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(kMagic, sizeof(kMagic));
    write_le<std::uint32_t>(out, kVersion);
    write_le<std::int32_t>(out, config.layers);
    write_le<std::int32_t>(out, config.hidden_size);
    write_le<std::int32_t>(out, config.vocab_size);
    write_le<std::int32_t>(out, config.unroll_steps);
    write_le<std::int32_t>(out, config.batch_size);
    write_le<double>(out, config.dropout_keep);
    write_le<double>(out, config.max_grad_norm);
    write_le<std::int32_t>(out, config.epochs);
    write_le<double>(out, config.lr_initial);
    write_le<double>(out, config.lr_decay);
    write_le<std::int32_t>(out, config.decay_start_epoch);
    write_le<double>(out, config.init_scale);
    write_le<std::uint64_t>(out, config.seed);
    write_le<std::uint64_t>(out, vocabulary_hash);

    auto views = tensor_views(params);
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(views.size()));
    for (const auto& [name, tensor] : views) write_tensor(out, name, *tensor);
    if (!out) throw IoError("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw CheckpointError("bad magic in " + path.string());
    const auto version = read_le<std::uint32_t>(in);
    if (version != kVersion)
        throw CheckpointError("unsupported format version " + std::to_string(version));

    Checkpoint ckpt;
    LstmConfig& c = ckpt.config;
    c.layers = read_le<std::int32_t>(in);
    c.hidden_size = read_le<std::int32_t>(in);
    c.vocab_size = read_le<std::int32_t>(in);
    c.unroll_steps = read_le<std::int32_t>(in);
    c.batch_size = read_le<std::int32_t>(in);
    c.dropout_keep = read_le<double>(in);
    c.max_grad_norm = read_le<double>(in);
    c.epochs = read_le<std::int32_t>(in);
    c.lr_initial = read_le<double>(in);
    c.lr_decay = read_le<double>(in);
    c.decay_start_epoch = read_le<std::int32_t>(in);
    c.init_scale = read_le<double>(in);
    c.seed = read_le<std::uint64_t>(in);
    c.validate();
    ckpt.vocabulary_hash = read_le<std::uint64_t>(in);

    const int d = c.hidden_size;
    const int v = c.vocab_size;
    LstmParams& p = ckpt.params;
    p.embedding.resize(v, d);
    for (int l = 0; l < 2; ++l) {
        p.layers[l].w_in.resize(4 * d, d);
        p.layers[l].w_rec.resize(4 * d, d);
        p.layers[l].bias.resize(4 * d, 1);
    }
    p.proj.resize(d, v);
    p.proj_bias.resize(v, 1);

    auto views = tensor_views(p);
    const auto count = read_le<std::uint32_t>(in);
    if (count != views.size()) throw CheckpointError("unexpected tensor count");
    for (auto& [name, tensor] : views) read_tensor(in, name, *tensor);
    return ckpt;
}

}  // namespace astlm
