#include "viewfed/transform.hpp"

namespace viewfed {

namespace {

constexpr const char* kForEach = "vf:for-each";
constexpr const char* kValueOf = "vf:value-of";

void check_node(const Node& n) {
    if (const std::string* p = n.attribute(kForEach)) {
        try {
            vpath_parse(*p);
        } catch (const PathSyntaxError& e) {
            throw TransformError(std::string("bad vf:for-each path: ") + e.what());
        }
    }
    if (const std::string* p = n.attribute(kValueOf)) {
        try {
            vpath_parse(*p);
        } catch (const PathSyntaxError& e) {
            throw TransformError(std::string("bad vf:value-of path: ") + e.what());
        }
        if (!n.children().empty())
            throw TransformError("vf:value-of element '" + n.name() + "' must have no children");
    }
    for (const Node& c : n.children()) check_node(c);
}

std::string string_value(const PathResult& r) {
    if (r.attr_value) return *r.attr_value;
    return r.node->string_value();
}

// Expands one template node against a context node; for-each makes this
// produce zero or more copies.
std::vector<Node> expand(const Document& doc, const Node& tpl, const Node& ctx) {
    std::vector<const Node*> contexts;
    if (const std::string* p = tpl.attribute(kForEach)) {
        for (const PathResult& r : vpath_eval(doc, ctx, vpath_parse(*p))) {
            if (r.is_node()) contexts.push_back(r.node);
        }
    } else {
        contexts.push_back(&ctx);
    }

    std::vector<Node> out;
    for (const Node* c : contexts) {
        Node copy(tpl.name());
        for (const auto& [k, v] : tpl.attributes()) {
            if (k == kForEach || k == kValueOf) continue;
            copy.set_attribute(k, v);
        }
        if (const std::string* p = tpl.attribute(kValueOf)) {
            auto results = vpath_eval(doc, *c, vpath_parse(*p));
            copy.set_text(results.empty() ? std::string() : string_value(results.front()));
        } else {
            copy.set_text(tpl.text());
            for (const Node& child : tpl.children()) {
                for (Node& expanded : expand(doc, child, *c)) copy.add_child(std::move(expanded));
            }
        }
        out.push_back(std::move(copy));
    }
    return out;
}

}  // namespace

TransformTemplate transform_parse(const Document& tpl) {
    check_node(tpl.root);
    return TransformTemplate{tpl};
}

Document transform_apply(const Document& doc, const TransformTemplate& tpl) {
    std::vector<Node> roots = expand(doc, tpl.body.root, doc.root);
    if (roots.size() != 1)
        throw TransformError("template root expanded to " + std::to_string(roots.size()) +
                             " elements; exactly one required");
    return Document{std::move(roots.front())};
}

}  // namespace viewfed
