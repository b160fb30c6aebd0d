#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "viewfed/document.hpp"

namespace viewfed {

// Path expression grammar:
//   path     := '/'? step ('/' step)*
//   step     := selector pred?
//   selector := NAME | '*' | '@' NAME
//   pred     := '[' ( '@' NAME '=' '\'' LITERAL '\'' | INT ) ']'
// An '@' selector may appear only as the final step; positions are 1-based.
struct AttrEqualsPred {
    std::string attr;
    std::string literal;
};

struct PositionPred {
    int index;  // >= 1
};

struct Step {
    bool is_attribute = false;  // selector was '@NAME'
    std::string name;           // element name, attribute name, or "*"
    std::optional<std::variant<AttrEqualsPred, PositionPred>> predicate;
};

struct PathExpr {
    bool absolute = false;
    std::vector<Step> steps;
};

// A result is either an element node (borrowed from the input document) or an
// attribute value string.
struct PathResult {
    const Node* node = nullptr;
    std::optional<std::string> attr_value;

    bool is_node() const { return node != nullptr; }
};

PathExpr vpath_parse(const std::string& expr);

// Absolute paths start at the document root (first step must match the root
// name or '*'); relative paths navigate from `context`. Results come back in
// document order, duplicate-free; no match yields an empty sequence.
std::vector<PathResult> vpath_eval(const Document& doc, const PathExpr& path);
std::vector<PathResult> vpath_eval(const Document& doc, const Node& context,
                                   const PathExpr& path);

}  // namespace viewfed
