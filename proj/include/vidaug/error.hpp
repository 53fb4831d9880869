// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vidaug {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TranscriptError : public Error {
public:
    enum class Kind { MalformedTimestamp, InvertedInterval, EmptyTranscript, MissingHeader };

    TranscriptError(Kind kind, std::size_t line, std::string content, const std::string& what)
        : Error(what), kind_(kind), line_(line), content_(std::move(content)) {}

    Kind kind() const noexcept { return kind_; }
    /// 1-based line number in the source text, 0 when not tied to a line.
    std::size_t line() const noexcept { return line_; }
    const std::string& content() const noexcept { return content_; }

private:
    Kind kind_;
    std::size_t line_;
    std::string content_;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class OutOfBounds : public Error {
public:
    using Error::Error;
};

class MissingFrame : public Error {
public:
    MissingFrame(long index, std::string path)
        : Error("missing frame " + std::to_string(index) + " (" + path + ")"),
          index_(index), path_(std::move(path)) {}

    long index() const noexcept { return index_; }
    const std::string& path() const noexcept { return path_; }

private:
    long index_;
    std::string path_;
};

class ImageIoError : public Error {
public:
    using Error::Error;
};

/// A remote backend could not produce a result (network, timeout, HTTP error,
/// or the backend is an offline stub).
class BackendUnavailable : public Error {
public:
    using Error::Error;
};

class UnparseableScore : public Error {
public:
    explicit UnparseableScore(std::string response)
        : Error("no integer in 1..10 found in response"), response_(std::move(response)) {}

    const std::string& response() const noexcept { return response_; }

private:
    std::string response_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class SchemaMismatch : public Error {
public:
    using Error::Error;
};

class InvariantViolation : public Error {
public:
    using Error::Error;
};

}  // namespace vidaug
