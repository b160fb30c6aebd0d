#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace viewfed {

// Classes of failures an adapter can raise while generating a view.
// Fallback rules match on these.
enum class SourceErrorClass {
    Unavailable,
    Timeout,
    HttpStatus,
    Malformed,
    Validation,
};

std::string to_string(SourceErrorClass c);

struct SourceError : std::runtime_error {
    SourceErrorClass cls;
    int http_status = 0;  // set when cls == HttpStatus

    SourceError(SourceErrorClass c, std::string msg, int status = 0)
        : std::runtime_error(std::move(msg)), cls(c), http_status(status) {}
};

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(std::size_t pos, const std::string& reason)
        : std::runtime_error("parse error at offset " + std::to_string(pos) + ": " + reason),
          position(pos) {}
};

struct MixedContentError : ParseError {
    MixedContentError(std::size_t pos, const std::string& element)
        : ParseError(pos, "element '" + element + "' mixes text and child elements") {}
};

struct PathSyntaxError : std::runtime_error {
    std::size_t position;
    PathSyntaxError(std::size_t pos, const std::string& reason)
        : std::runtime_error("path syntax error at offset " + std::to_string(pos) + ": " + reason),
          position(pos) {}
};

struct TransformError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownViewError : std::runtime_error {
    explicit UnknownViewError(const std::string& name)
        : std::runtime_error("unknown view: " + name) {}
};

struct OutdatedCacheError : std::runtime_error {
    explicit OutdatedCacheError(const std::string& name)
        : std::runtime_error("view '" + name + "' content is older than its ttl") {}
};

struct ViewInError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SnapshotUnavailableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotWritableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DependencyUnsatisfiedError : std::runtime_error {
    explicit DependencyUnsatisfiedError(const std::string& view)
        : std::runtime_error("base view not available in generation context: " + view) {}
};

struct GroupPrepareFailed : std::runtime_error {
    std::string member;
    GroupPrepareFailed(std::string m, const std::string& reason)
        : std::runtime_error("group member '" + m + "' failed to prepare: " + reason),
          member(std::move(m)) {}
};

struct CompositionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigSyntaxError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigSemanticError : std::runtime_error {
    std::vector<std::string> issues;
    explicit ConfigSemanticError(std::vector<std::string> list)
        : std::runtime_error(join(list)), issues(std::move(list)) {}

private:
    static std::string join(const std::vector<std::string>& list) {
        std::string out = "invalid configuration:";
        for (const auto& s : list) out += "\n  - " + s;
        return out;
    }
};

}  // namespace viewfed
