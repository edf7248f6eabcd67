#ifndef ASTLM_ERRORS_HPP
#define ASTLM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace astlm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownNodeId : Error {
    int id;
    explicit UnknownNodeId(int id_)
        : Error("unknown node id " + std::to_string(id_)), id(id_) {}
};

// Raised by the statement parser; offset is a byte offset into the input.
struct SyntaxError : Error {
    std::size_t offset;
    std::string expected;
    SyntaxError(std::size_t offset_, std::string expected_)
        : Error("syntax error at offset " + std::to_string(offset_) + ": expected " + expected_),
          offset(offset_),
          expected(std::move(expected_)) {}
};

struct BlockInsideStatement : Error {
    BlockInsideStatement() : Error("statement flattening reached a block node") {}
};

struct MalformedToken : Error {
    explicit MalformedToken(const std::string& what) : Error("malformed token: " + what) {}
};

struct MalformedSentence : Error {
    explicit MalformedSentence(const std::string& what) : Error("malformed sentence: " + what) {}
};

struct EmptyCorpus : Error {
    EmptyCorpus() : Error("corpus contains no sentences") {}
};

struct EmptySequence : Error {
    EmptySequence() : Error("evaluation sequence is empty") {}
};

struct CorpusTooSmall : Error {
    explicit CorpusTooSmall(const std::string& what) : Error("corpus too small: " + what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error("io error: " + what) {}
};

struct IndexOutOfVocabulary : Error {
    explicit IndexOutOfVocabulary(int index)
        : Error("token index " + std::to_string(index) + " outside model vocabulary") {}
};

struct CheckpointError : Error {
    explicit CheckpointError(const std::string& what) : Error("checkpoint: " + what) {}
};

}  // namespace astlm

#endif  // ASTLM_ERRORS_HPP
