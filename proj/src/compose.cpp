#include "viewfed/compose.hpp"

#include <set>

#include "viewfed/vpath.hpp"

namespace viewfed {

namespace {

struct KeyedRecords {
    // key -> records from one source, in document order
    std::map<std::string, std::vector<const Node*>> by_key;
};

KeyedRecords collect(const JoinSource& src, const Document& doc) {
    PathExpr record_path, key_path;
    try {
        record_path = vpath_parse(src.record_path);
        key_path = vpath_parse(src.key_path);
    } catch (const PathSyntaxError& e) {
        throw CompositionError("source '" + src.view + "': " + e.what());
    }
    KeyedRecords out;
    for (const PathResult& r : vpath_eval(doc, record_path)) {
        if (!r.is_node()) continue;
        auto keys = vpath_eval(doc, *r.node, key_path);
        if (keys.empty()) continue;  // unkeyed record, dropped
        std::string key =
            keys.front().attr_value ? *keys.front().attr_value : keys.front().node->string_value();
        out.by_key[key].push_back(r.node);
    }
    return out;
}

}  // namespace

Document join_by_key(const JoinSpec& spec,
                     const std::map<std::string, SourceContent>& contents) {
    struct SourceState {
        const JoinSource* src;
        const SourceContent* content;
        KeyedRecords records;
    };

    std::vector<SourceState> states;
    std::set<std::string> keys;
    for (const JoinSource& src : spec.sources) {
        auto it = contents.find(src.view);
        if (it == contents.end())
            throw CompositionError("no content supplied for source view: " + src.view);
        SourceState st{&src, &it->second, {}};
        if (it->second.doc) {
            st.records = collect(src, *it->second.doc);
            for (const auto& [k, _] : st.records.by_key) keys.insert(k);
        }
        states.push_back(std::move(st));
    }

    Document out;
    out.root = Node(spec.output_root);
    for (const std::string& key : keys) {  // std::set iterates lexicographically
        Node entry(spec.entry_element);
        entry.set_attribute(spec.key_attr, key);
        for (const SourceState& st : states) {
            Node source("source");
            source.set_attribute("name", st.src->view);
            if (!st.content->doc) {
                source.set_attribute("status", "unavailable");
            } else {
                if (st.content->available) {
                    source.set_attribute("status", "ok");
                } else {
                    source.set_attribute("status", "stale");
                    source.set_attribute("age", std::to_string(st.content->age_ms / 1000));
                }
                auto it = st.records.by_key.find(key);
                if (it != st.records.by_key.end()) {
                    for (const Node* rec : it->second) source.add_child(*rec);
                }
            }
            entry.add_child(std::move(source));
        }
        out.root.add_child(std::move(entry));
    }
    return out;
}

}  // namespace viewfed
