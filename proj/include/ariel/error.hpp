#pragma once

#include <stdexcept>
#include <string>

namespace ariel {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used in per-record error objects of the CLI.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// Grammar text could not be parsed or is structurally invalid.
class GrammarError : public Error {
public:
    GrammarError(const std::string& message, std::size_t line = 0, std::size_t column = 0)
        : Error("grammar", line ? message + " (line " + std::to_string(line) + ", column " +
                                      std::to_string(column) + ")"
                                : message),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// A token or model does not belong to the expected vocabulary.
class VocabularyError : public Error {
public:
    explicit VocabularyError(const std::string& message) : Error("vocabulary_mismatch", message) {}
};

/// A symbol received zero probability: the sentence lies outside the
/// support of the language model (for the trie, the extended prefix was
/// never observed).
class OutOfSupportError : public Error {
public:
    explicit OutOfSupportError(const std::string& message) : Error("unseen_prefix", message) {}
};

/// A floating-point axis extent fell below the representable floor.
class PrecisionError : public Error {
public:
    explicit PrecisionError(const std::string& message) : Error("precision_underflow", message) {}
};

/// Malformed input that is not a grammar or vocabulary problem.
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& message) : Error("invalid_argument", message) {}
};

/// A serialized artifact is truncated, corrupt or of the wrong version.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& message) : Error("format", message) {}
};

/// Rejection sampling could not fill the requested dataset splits.
class DatasetTimeout : public Error {
public:
    explicit DatasetTimeout(const std::string& message) : Error("dataset_timeout", message) {}
};

}  // namespace ariel
