#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "viewfed/document.hpp"

namespace viewfed {

enum class Cardinality { One, Many, Optional };

struct ElementRule {
    std::set<std::string> required_attrs;
    std::map<std::string, Cardinality> allowed_children;
    bool allow_text = false;
};

// Minimal structural schema: per element name, required attributes, allowed
// children with cardinality, and whether text content is permitted. Elements
// without a rule are unconstrained, but may only appear where allowed.
struct StructSchema {
    std::string root;  // required root element name
    std::map<std::string, ElementRule> rules;
};

// Empty vector means the document conforms. At most the first 10 violations
// are reported.
std::vector<std::string> schema_check(const Document& doc, const StructSchema& schema);

}  // namespace viewfed
