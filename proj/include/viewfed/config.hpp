#pragma once

#include <map>
#include <string>
#include <vector>

#include "viewfed/cache.hpp"
#include "viewfed/compose.hpp"
#include "viewfed/policy.hpp"
#include "viewfed/schema.hpp"

namespace viewfed {

// Whole-service configuration, loaded from a single JSON document:
//   {listen, data_dir, schemas, views:[{name, adapter, cache, triggers,
//    fallbacks, depends_on}], joins:[...]}
// Durations are integer milliseconds; `${DATA_DIR}` is interpolated in paths.
struct ServiceConfig {
    std::string listen_host = "127.0.0.1";
    int listen_port = 8080;
    std::string data_dir;
    std::map<std::string, StructSchema> schemas;
    std::vector<ViewConfig> views;  // declared views, in file order
    std::vector<JoinSpec> joins;
    std::map<std::string, CachePolicy> join_policies;  // per-join cache override

    // Declared views plus one expanded view per join, in file order.
    std::vector<ViewConfig> expanded_views() const;
};

// Expands a join declaration into a view backed by a multi-base join adapter
// with on_dependency triggers on every source.
ViewConfig site_view_config(const JoinSpec& spec, const CachePolicy& policy);

// Parses and fully validates; throws ConfigSyntaxError or ConfigSemanticError.
ServiceConfig config_load(const std::string& text);

// Static validation: reference resolution, invariants, cycle detection.
// Returns an empty list when the configuration is valid.
std::vector<std::string> config_validate(const ServiceConfig& cfg);

// Re-serializes a loaded configuration (load -> dump -> load is a fixpoint).
std::string config_dump(const ServiceConfig& cfg);

}  // namespace viewfed
