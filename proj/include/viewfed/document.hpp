#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "viewfed/errors.hpp"

namespace viewfed {

enum class DocFormat { Xml, Json };

DocFormat parse_format(const std::string& s);  // "xml" | "json"
std::string to_string(DocFormat f);

// One element of the document tree. Attribute order is insertion order and
// preserved by serialization; names are unique within a node. An element may
// not mix non-whitespace text with child elements.
class Node {
public:
    Node() = default;
    explicit Node(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    const std::vector<std::pair<std::string, std::string>>& attributes() const {
        return attrs_;
    }
    // Replaces the value if the attribute already exists.
    void set_attribute(const std::string& name, std::string value);
    void remove_attribute(const std::string& name);
    const std::string* attribute(const std::string& name) const;

    const std::vector<Node>& children() const { return children_; }
    std::vector<Node>& children() { return children_; }
    Node& add_child(Node child);

    const std::optional<std::string>& text() const { return text_; }
    void set_text(std::optional<std::string> t) { text_ = std::move(t); }

    // Concatenated text of this element and its descendants, document order.
    std::string string_value() const;

private:
    std::string name_;
    std::vector<std::pair<std::string, std::string>> attrs_;
    std::vector<Node> children_;
    std::optional<std::string> text_;
};

struct Document {
    Node root;
};

bool valid_element_name(const std::string& name);
bool valid_attribute_name(const std::string& name);

Document doc_parse(const std::string& input, DocFormat format);
std::string doc_serialize(const Document& doc, DocFormat format);

// Structural equality; attribute order ignored, child order significant.
bool doc_equal(const Document& a, const Document& b);
bool node_equal(const Node& a, const Node& b);

}  // namespace viewfed
