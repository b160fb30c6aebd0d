#pragma once

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "viewfed/document.hpp"
#include "viewfed/vpath.hpp"

namespace testsupport {

using viewfed::Document;
using viewfed::Node;

inline const std::vector<std::string>& name_pool() {
    static const std::vector<std::string> names{"sites", "site",  "row",   "item",
                                                "entry", "value", "group", "record"};
    return names;
}

// Random documents with same-name siblings kept contiguous, matching the
// JSON child-grouping representation.
inline Node random_node(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> name_dist(0, static_cast<int>(name_pool().size()) - 1);
    Node node(name_pool()[name_dist(rng)]);

    std::uniform_int_distribution<int> attr_count(0, 3);
    int attrs = attr_count(rng);
    static const std::vector<std::string> attr_names{"name", "status", "id", "kind"};
    static const std::vector<std::string> values{"A", "B", "C", "ok", "down", "x<&>\"'y", ""};
    std::uniform_int_distribution<int> attr_name_dist(0, static_cast<int>(attr_names.size()) - 1);
    std::uniform_int_distribution<int> value_dist(0, static_cast<int>(values.size()) - 1);
    for (int i = 0; i < attrs; ++i)
        node.set_attribute(attr_names[attr_name_dist(rng)], values[value_dist(rng)]);

    std::uniform_int_distribution<int> choice(0, 99);
    if (depth > 0 && choice(rng) < 60) {
        std::uniform_int_distribution<int> child_count(0, 4);
        int n = child_count(rng);
        std::vector<Node> children;
        for (int i = 0; i < n; ++i) children.push_back(random_node(rng, depth - 1));
        // group same-name siblings so both serializations can represent them
        std::stable_sort(children.begin(), children.end(),
                         [](const Node& a, const Node& b) { return a.name() < b.name(); });
        for (Node& c : children) node.add_child(std::move(c));
    } else if (choice(rng) < 85) {
        node.set_text(values[value_dist(rng)]);
    }
    return node;
}

inline Document random_document(std::mt19937& rng, int depth = 3) {
    return Document{random_node(rng, depth)};
}

// ---------------------------------------------------------------------------
// Brute-force path oracle: enumerates every node with a parent pointer, then
// filters the full node set step by step. Written independently of the
// production evaluator.

struct FlatNode {
    const Node* node;
    const Node* parent;  // null for root
};

inline void enumerate(const Node& n, const Node* parent, std::vector<FlatNode>& out) {
    out.push_back({&n, parent});
    for (const Node& c : n.children()) enumerate(c, &n, out);
}

struct OracleResult {
    const Node* node = nullptr;
    std::string attr_value;
    bool is_attr = false;
};

inline std::vector<OracleResult> oracle_eval(const Document& doc, const Node* context,
                                             const viewfed::PathExpr& path) {
    std::vector<FlatNode> all;
    enumerate(doc.root, nullptr, all);

    auto parent_of = [&](const Node* n) -> const Node* {
        for (const FlatNode& f : all)
            if (f.node == n) return f.parent;
        return nullptr;
    };

    std::vector<const Node*> current;
    std::size_t first_step = 0;
    if (path.absolute) {
        const auto& s = path.steps.front();
        if (!s.is_attribute) {
            if (s.name == "*" || s.name == doc.root.name()) current.push_back(&doc.root);
            if (s.predicate) {
                if (const auto* p = std::get_if<viewfed::AttrEqualsPred>(&*s.predicate)) {
                    std::vector<const Node*> kept;
                    for (const Node* n : current) {
                        const std::string* v = n->attribute(p->attr);
                        if (v && *v == p->literal) kept.push_back(n);
                    }
                    current = kept;
                } else {
                    int idx = std::get<viewfed::PositionPred>(*s.predicate).index;
                    if (idx != 1) current.clear();
                }
            }
            first_step = 1;
        } else {
            std::vector<OracleResult> out;
            if (const std::string* v = doc.root.attribute(s.name))
                out.push_back({nullptr, *v, true});
            return out;
        }
    } else {
        current.push_back(context ? context : &doc.root);
    }

    for (std::size_t si = first_step; si < path.steps.size(); ++si) {
        const auto& step = path.steps[si];
        if (step.is_attribute) {
            std::vector<OracleResult> out;
            for (const FlatNode& f : all) {
                bool in_current = false;
                for (const Node* c : current)
                    if (c == f.node) in_current = true;
                if (!in_current) continue;
                bool pred_ok = true;
                if (step.predicate) {
                    const auto* p = std::get_if<viewfed::PositionPred>(&*step.predicate);
                    pred_ok = p && p->index == 1;
                }
                const std::string* v = f.node->attribute(step.name);
                if (pred_ok && v) out.push_back({nullptr, *v, true});
            }
            return out;
        }
        // candidate nodes: children of current contexts matching the selector,
        // predicate applied per parent among matched siblings
        std::vector<const Node*> next;
        for (const FlatNode& f : all) {
            if (!f.parent) continue;
            bool parent_in_current = false;
            for (const Node* c : current)
                if (c == f.parent) parent_in_current = true;
            if (!parent_in_current) continue;
            if (step.name != "*" && step.name != f.node->name()) continue;

            if (step.predicate) {
                if (const auto* p = std::get_if<viewfed::AttrEqualsPred>(&*step.predicate)) {
                    const std::string* v = f.node->attribute(p->attr);
                    if (!v || *v != p->literal) continue;
                } else {
                    int idx = std::get<viewfed::PositionPred>(*step.predicate).index;
                    // position among this parent's children matching the selector
                    int pos = 0;
                    bool selected = false;
                    for (const Node& sib : f.parent->children()) {
                        if (step.name == "*" || step.name == sib.name()) {
                            ++pos;
                            if (&sib == f.node && pos == idx) selected = true;
                        }
                    }
                    if (!selected) continue;
                }
            }
            next.push_back(f.node);
        }
        // document order: the enumeration order of `all`
        current = next;
    }
    (void)parent_of;

    std::vector<OracleResult> out;
    for (const FlatNode& f : all) {
        for (const Node* n : current)
            if (n == f.node) out.push_back({n, "", false});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Naive recursive transform interpreter built on the oracle evaluator.

inline std::vector<Node> naive_transform(const Document& doc, const Node& tpl, const Node& ctx) {
    std::vector<const Node*> contexts;
    if (const std::string* p = tpl.attribute("vf:for-each")) {
        for (const auto& r : oracle_eval(doc, &ctx, viewfed::vpath_parse(*p)))
            if (!r.is_attr) contexts.push_back(r.node);
    } else {
        contexts.push_back(&ctx);
    }
    std::vector<Node> out;
    for (const Node* c : contexts) {
        Node copy(tpl.name());
        for (const auto& [k, v] : tpl.attributes())
            if (k != "vf:for-each" && k != "vf:value-of") copy.set_attribute(k, v);
        if (const std::string* p = tpl.attribute("vf:value-of")) {
            auto results = oracle_eval(doc, c, viewfed::vpath_parse(*p));
            if (results.empty()) {
                copy.set_text(std::string());
            } else if (results.front().is_attr) {
                copy.set_text(results.front().attr_value);
            } else {
                copy.set_text(results.front().node->string_value());
            }
        } else {
            copy.set_text(tpl.text());
            for (const Node& child : tpl.children())
                for (Node& e : naive_transform(doc, child, *c)) copy.add_child(std::move(e));
        }
        out.push_back(std::move(copy));
    }
    return out;
}

// ---------------------------------------------------------------------------

class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        static std::atomic<int> counter{0};
        path_ = base / ("viewfed_test_" + std::to_string(::getpid()) + "_" +
                        std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name, const std::string& content) const {
        auto p = path_ / name;
        std::filesystem::create_directories(p.parent_path());
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p.string();
    }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace testsupport
