#include "viewfed/schema.hpp"

namespace viewfed {

namespace {

void check_node(const Node& n, const StructSchema& schema, const std::string& path,
                std::vector<std::string>& out) {
    if (out.size() >= 10) return;
    auto it = schema.rules.find(n.name());
    if (it == schema.rules.end()) return;  // unconstrained element
    const ElementRule& rule = it->second;

    for (const std::string& attr : rule.required_attrs) {
        if (!n.attribute(attr)) {
            out.push_back(path + ": missing attribute " + attr);
            if (out.size() >= 10) return;
        }
    }
    if (!rule.allow_text && n.text() && !n.text()->empty()) {
        out.push_back(path + ": text content not allowed");
        if (out.size() >= 10) return;
    }

    std::map<std::string, int> counts;
    for (const Node& c : n.children()) {
        auto allowed = rule.allowed_children.find(c.name());
        if (allowed == rule.allowed_children.end()) {
            out.push_back(path + ": child element " + c.name() + " not allowed");
            if (out.size() >= 10) return;
            continue;
        }
        ++counts[c.name()];
        check_node(c, schema, path + "/" + c.name(), out);
        if (out.size() >= 10) return;
    }
    for (const auto& [name, card] : rule.allowed_children) {
        int count = counts.count(name) ? counts[name] : 0;
        if (card == Cardinality::One && count != 1)
            out.push_back(path + ": child " + name + " must occur exactly once (found " +
                          std::to_string(count) + ")");
        else if (card == Cardinality::Optional && count > 1)
            out.push_back(path + ": child " + name + " must occur at most once (found " +
                          std::to_string(count) + ")");
        if (out.size() >= 10) return;
    }
}

}  // namespace

std::vector<std::string> schema_check(const Document& doc, const StructSchema& schema) {
    std::vector<std::string> out;
    if (!schema.root.empty() && doc.root.name() != schema.root) {
        out.push_back("root element must be " + schema.root + ", found " + doc.root.name());
        return out;
    }
    check_node(doc.root, schema, "/" + doc.root.name(), out);
    return out;
}

}  // namespace viewfed
