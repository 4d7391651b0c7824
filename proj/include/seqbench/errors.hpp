#pragma once

#include <stdexcept>
#include <string>

namespace seqbench {

// Base of every error raised by the pipeline. Subclasses map onto the
// error classes the CLI turns into exit statuses.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input data could not be turned into an evaluation (exit status 3).
class DataError : public Error {
public:
    using Error::Error;
};

class MalformedLine : public DataError {
public:
    MalformedLine(std::size_t line_no, const std::string& reason)
        : DataError("malformed line " + std::to_string(line_no) + ": " + reason),
          line_no_(line_no) {}

    std::size_t line_no() const noexcept { return line_no_; }

private:
    std::size_t line_no_;
};

class EmptyInput : public DataError {
public:
    EmptyInput() : DataError("input contains no ratings") {}
};

class EmptyAfterFilter : public DataError {
public:
    EmptyAfterFilter() : DataError("no ratings survive the minimum-support filters") {}
};

class NoSequences : public DataError {
public:
    NoSequences() : DataError("no sequence of length >= 2 could be built") {}
};

class DegenerateSplit : public DataError {
public:
    using DataError::DataError;
};

class UnknownItem : public DataError {
public:
    explicit UnknownItem(const std::string& item)
        : DataError("item '" + item + "' is not in the training catalog") {}
};

class NoTransitions : public DataError {
public:
    NoTransitions() : DataError("test set contains no transitions") {}
};

class ZeroVector : public Error {
public:
    ZeroVector() : Error("cosine similarity of a zero vector") {}
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

// Experiment configuration rejected before touching any data (exit status 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace seqbench
