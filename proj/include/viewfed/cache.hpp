#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "viewfed/policy.hpp"
#include "viewfed/schema.hpp"

namespace viewfed {

enum class RefreshCause { Manual, Interval, Notification, Read, Write, Expiry, Dependency };
std::string to_string(RefreshCause c);

struct RefreshOutcome {
    enum class Kind { Refreshed, ServedStaleKept, Failed };
    Kind kind;
    std::uint64_t generation = 0;
    std::optional<SourceErrorClass> error;
    int http_status = 0;
    std::string detail;
};

struct ReadMeta {
    std::uint64_t generation = 0;
    TimeMs generated_at = 0;
    TimeMs age_ms = 0;
    std::uint64_t epoch = 0;
};

struct ViewStatus {
    std::string name;
    std::string cache_type;
    std::string state;  // empty | exposed | error
    std::uint64_t generation = 0;
    TimeMs age_ms = -1;
    std::string group;
    std::uint64_t adapter_calls = 0;
};

// Throws SourceError(Validation) listing up to the first 10 violations.
void validate_content(const Document& doc, ValidationMode mode, const StructSchema* schema);

// Per-view cache state machine. Exposure swaps happen under one lock held for
// pointer assignment only, so readers never wait out a refresh; views in a
// consistency group are always swapped together under a single epoch.
class CacheEngine {
public:
    CacheEngine(std::vector<ViewConfig> views, std::map<std::string, StructSchema> schemas,
                Clock& clock);
    ~CacheEngine();

    CacheEngine(const CacheEngine&) = delete;
    CacheEngine& operator=(const CacheEngine&) = delete;

    RefreshOutcome refresh_view(const std::string& name, RefreshCause cause);
    std::pair<Document, ReadMeta> read_view(const std::string& name);
    std::map<std::string, std::pair<Document, ReadMeta>> read_snapshot(
        const std::vector<std::string>& names);

    // Topological order of all views transitively depending on `name` through
    // declared on_dependency triggers; each appears once.
    std::vector<std::string> plan_dependents(const std::string& name) const;

    std::vector<std::string> notify(const std::string& event_name);

    // Exposes prepared contents for every member of a group at one atomic
    // instant; partial exposure is impossible.
    void swap_group(const std::string& group, std::map<std::string, Document> prepared);

    // Fires due interval and expiry triggers. Returns what fired.
    std::vector<std::pair<std::string, RefreshCause>> scheduler_tick(TimeMs now);

    // Write path for writable file views; fires on_write triggers.
    void write_view_content(const std::string& name, const Document& doc);

    std::vector<ViewStatus> list_views() const;
    bool has_view(const std::string& name) const;
    const ViewConfig& view_config(const std::string& name) const;
    std::uint64_t adapter_calls(const std::string& name) const;

private:
    struct Exposed {
        std::shared_ptr<const Document> doc;
        std::uint64_t generation = 0;
        TimeMs generated_at = 0;
        std::uint64_t epoch = 0;
    };

    struct ViewState {
        ViewConfig cfg;
        // guarded by exposure_mutex_
        std::shared_ptr<const Exposed> exposed;
        bool poisoned = false;
        int consecutive_failures = 0;
        std::optional<SourceErrorClass> last_error;
        std::atomic<std::uint64_t> generation_counter{0};
        // scheduler bookkeeping (engine-wide scheduler mutex); one slot per
        // trigger rule, interval kinds only used
        std::vector<TimeMs> interval_last_fired;
        std::uint64_t expiry_fired_generation = 0;
        std::atomic<std::uint64_t> adapter_calls{0};
    };

    // One refresh slot per view (or per group); trigger-driven refreshes that
    // find the slot busy coalesce into a single pending follow-up.
    struct RefreshSlot {
        std::mutex mutex;
        std::atomic<bool> pending{false};
    };

    ViewState& state(const std::string& name);
    const ViewState& state(const std::string& name) const;
    RefreshSlot& slot_for(const ViewState& v);

    RefreshOutcome refresh_internal(const std::string& name, RefreshCause cause, bool cascade);
    RefreshOutcome refresh_single_locked(ViewState& v, RefreshCause cause);
    RefreshOutcome refresh_group_locked(const std::string& group, const std::string& trigger_view,
                                        RefreshCause cause);
    void cascade_dependents(const std::string& name);

    // Generates + validates content, applying fallback rules (including retry
    // loops). Returns the document, or the terminal disposition.
    struct GenResult {
        std::optional<Document> doc;
        FallbackAction disposition = FallbackAction::Error;  // when !doc
        std::optional<SourceErrorClass> error;
        int http_status = 0;
        std::string detail;
    };
    GenResult generate_with_fallback(ViewState& v,
                                     const std::map<std::string, Document>& prepared);
    Document generate_once(ViewState& v, const std::map<std::string, Document>& prepared);
    GenContext build_context(ViewState& v, const std::map<std::string, Document>& prepared);
    void ensure_base_content(const std::string& base);

    void expose(ViewState& v, Document doc, std::uint64_t generation, std::uint64_t epoch);
    void persist_disk(const ViewState& v, const Document& doc, std::uint64_t generation,
                      TimeMs generated_at, std::uint64_t epoch);
    void restore_disk_caches();

    std::vector<std::string> group_members(const std::string& group) const;

    Clock& clock_;
    std::map<std::string, StructSchema> schemas_;
    std::vector<std::string> order_;  // declaration order
    std::map<std::string, std::unique_ptr<ViewState>> views_;
    std::map<std::string, std::unique_ptr<RefreshSlot>> view_slots_;
    std::map<std::string, std::unique_ptr<RefreshSlot>> group_slots_;

    mutable std::mutex exposure_mutex_;
    std::map<std::string, std::uint64_t> group_epochs_;  // guarded by exposure_mutex_

    std::mutex scheduler_mutex_;
};

}  // namespace viewfed
