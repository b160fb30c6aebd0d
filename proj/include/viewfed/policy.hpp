#pragma once

#include <optional>
#include <string>
#include <vector>

#include "viewfed/adapter.hpp"
#include "viewfed/clock.hpp"

namespace viewfed {

enum class CacheType { Memory, Disk, None };
enum class ValidationMode { None, WellFormed, Schema };

struct CachePolicy {
    CacheType cache_type = CacheType::Memory;
    std::optional<std::string> disk_path;       // required for disk
    std::optional<TimeMs> ttl_ms;               // forbidden for none
    TimeMs update_timeout_ms = 10000;
    ValidationMode validation = ValidationMode::None;
    std::optional<std::string> schema_ref;      // required for schema validation
    std::optional<std::string> consistency_group;  // forbidden for none
};

enum class TriggerKind { Interval, Notification, OnRead, OnWrite, OnExpiry, OnDependency };

struct TriggerRule {
    TriggerKind kind;
    TimeMs every_ms = 0;       // interval
    std::string event_name;    // notification
    std::string source_view;   // on_dependency; must be a declared dependency
};

enum class FallbackMatch {
    SourceUnavailable,
    SourceTimeout,
    HttpStatus,
    SourceMalformed,
    ValidationError,
    Any,
};

enum class FallbackAction { Ignore, Error, Retry };

// Ordered list, first match wins; an implicit trailing (Any -> error) applies.
struct FallbackRule {
    FallbackMatch match = FallbackMatch::Any;
    int status_lo = 100, status_hi = 599;  // HttpStatus range
    FallbackAction action = FallbackAction::Error;
    int retries = 0;
    TimeMs backoff_ms = 0;
    // Disposition once retries are exhausted.
    FallbackAction final_disposition = FallbackAction::Error;

    bool matches(SourceErrorClass cls, int http_status) const;
};

struct ViewConfig {
    std::string name;
    AdapterSpec adapter;
    CachePolicy policy;
    std::vector<TriggerRule> triggers;
    std::vector<FallbackRule> fallbacks;
    std::vector<std::string> depends_on;

    bool has_trigger(TriggerKind kind) const;
};

}  // namespace viewfed
