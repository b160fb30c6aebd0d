#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "viewfed/clock.hpp"
#include "viewfed/document.hpp"

namespace viewfed {

// One source feeding a keyed join: records selected by record_path, each
// record keyed by key_path evaluated relative to the record.
struct JoinSource {
    std::string view;
    std::string record_path;
    std::string key_path;
};

struct JoinSpec {
    std::string name;  // name of the generated view
    std::vector<JoinSource> sources;
    std::string key_attr = "name";
    std::string output_root = "sites";
    std::string entry_element = "site";
};

// What the engine knows about one source at composition time. `doc` absent
// with available=false means the source has never produced content.
struct SourceContent {
    std::optional<Document> doc;
    bool available = true;
    TimeMs age_ms = 0;  // meaningful for stale content
};

// Joins records from all sources by key. One entry per distinct key, keys
// sorted lexicographically; each entry carries one <source name=... status=
// "ok|stale|unavailable"> child per source with the matching records copied
// in (deep copies).
Document join_by_key(const JoinSpec& spec,
                     const std::map<std::string, SourceContent>& contents);

}  // namespace viewfed
