#include "viewfed/cache.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace viewfed {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(RefreshCause c) {
    switch (c) {
        case RefreshCause::Manual: return "manual";
        case RefreshCause::Interval: return "interval";
        case RefreshCause::Notification: return "notification";
        case RefreshCause::Read: return "read";
        case RefreshCause::Write: return "write";
        case RefreshCause::Expiry: return "expiry";
        case RefreshCause::Dependency: return "dependency";
    }
    return "unknown";
}

bool FallbackRule::matches(SourceErrorClass cls, int http_status) const {
    switch (match) {
        case FallbackMatch::Any: return true;
        case FallbackMatch::SourceUnavailable: return cls == SourceErrorClass::Unavailable;
        case FallbackMatch::SourceTimeout: return cls == SourceErrorClass::Timeout;
        case FallbackMatch::SourceMalformed: return cls == SourceErrorClass::Malformed;
        case FallbackMatch::ValidationError: return cls == SourceErrorClass::Validation;
        case FallbackMatch::HttpStatus:
            return cls == SourceErrorClass::HttpStatus && http_status >= status_lo &&
                   http_status <= status_hi;
    }
    return false;
}

bool ViewConfig::has_trigger(TriggerKind kind) const {
    return std::any_of(triggers.begin(), triggers.end(),
                       [&](const TriggerRule& t) { return t.kind == kind; });
}

void validate_content(const Document& doc, ValidationMode mode, const StructSchema* schema) {
    if (mode == ValidationMode::None || mode == ValidationMode::WellFormed) return;
    // Well-formedness is guaranteed by construction; schema mode checks shape.
    if (!schema) throw SourceError(SourceErrorClass::Validation, "schema not supplied");
    std::vector<std::string> violations = schema_check(doc, *schema);
    if (violations.empty()) return;
    std::string msg = "document does not conform to schema:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw SourceError(SourceErrorClass::Validation, msg);
}

CacheEngine::CacheEngine(std::vector<ViewConfig> views,
                         std::map<std::string, StructSchema> schemas, Clock& clock)
    : clock_(clock), schemas_(std::move(schemas)) {
    for (ViewConfig& cfg : views) {
        order_.push_back(cfg.name);
        auto state = std::make_unique<ViewState>();
        state->cfg = std::move(cfg);
        state->interval_last_fired.assign(state->cfg.triggers.size(), INT64_MIN);
        const auto& name = state->cfg.name;
        if (state->cfg.policy.consistency_group) {
            const std::string& g = *state->cfg.policy.consistency_group;
            if (!group_slots_.count(g)) group_slots_[g] = std::make_unique<RefreshSlot>();
            group_epochs_.emplace(g, 0);
        } else {
            view_slots_[name] = std::make_unique<RefreshSlot>();
        }
        views_[name] = std::move(state);
    }
    restore_disk_caches();
}

CacheEngine::~CacheEngine() = default;

CacheEngine::ViewState& CacheEngine::state(const std::string& name) {
    auto it = views_.find(name);
    if (it == views_.end()) throw UnknownViewError(name);
    return *it->second;
}

const CacheEngine::ViewState& CacheEngine::state(const std::string& name) const {
    auto it = views_.find(name);
    if (it == views_.end()) throw UnknownViewError(name);
    return *it->second;
}

CacheEngine::RefreshSlot& CacheEngine::slot_for(const ViewState& v) {
    if (v.cfg.policy.consistency_group)
        return *group_slots_.at(*v.cfg.policy.consistency_group);
    return *view_slots_.at(v.cfg.name);
}

bool CacheEngine::has_view(const std::string& name) const { return views_.count(name) != 0; }

const ViewConfig& CacheEngine::view_config(const std::string& name) const {
    return state(name).cfg;
}

std::uint64_t CacheEngine::adapter_calls(const std::string& name) const {
    return state(name).adapter_calls.load();
}

std::vector<std::string> CacheEngine::group_members(const std::string& group) const {
    std::vector<std::string> members;
    for (const std::string& name : order_) {
        const ViewState& v = *views_.at(name);
        if (v.cfg.policy.consistency_group == group) members.push_back(name);
    }
    return members;
}

// ---------------------------------------------------------------------------
// Generation

GenContext CacheEngine::build_context(ViewState& v,
                                      const std::map<std::string, Document>& prepared) {
    GenContext ctx;
    ctx.timeout_ms = v.cfg.policy.update_timeout_ms;

    std::string kind = v.cfg.adapter.kind();
    if (kind == "derived") {
        for (const std::string& base : v.cfg.adapter.base_views()) {
            auto it = prepared.find(base);
            if (it != prepared.end()) {
                ctx.bases.emplace(base, it->second);
                continue;
            }
            ViewState& b = state(base);
            if (b.cfg.policy.cache_type == CacheType::None) {
                ctx.bases.emplace(base, generate_once(b, {}));
                continue;
            }
            ensure_base_content(base);
            std::lock_guard lock(exposure_mutex_);
            if (b.exposed) ctx.bases.emplace(base, *b.exposed->doc);
        }
    } else if (kind == "join") {
        TimeMs now = clock_.now();
        for (const std::string& base : v.cfg.adapter.base_views()) {
            auto it = prepared.find(base);
            if (it != prepared.end()) {
                ctx.sources.emplace(base, SourceContent{it->second, true, 0});
                continue;
            }
            ensure_base_content(base);
            std::lock_guard lock(exposure_mutex_);
            const ViewState& b = state(base);
            SourceContent content;
            if (b.exposed) {
                content.doc = *b.exposed->doc;
                content.available = !b.poisoned && b.consecutive_failures == 0;
                content.age_ms = now - b.exposed->generated_at;
            } else {
                content.available = false;
            }
            ctx.sources.emplace(base, std::move(content));
        }
    }
    return ctx;
}

void CacheEngine::ensure_base_content(const std::string& base) {
    ViewState& b = state(base);
    bool empty;
    {
        std::lock_guard lock(exposure_mutex_);
        empty = !b.exposed;
    }
    if (empty && b.cfg.policy.cache_type != CacheType::None)
        refresh_internal(base, RefreshCause::Dependency, /*cascade=*/false);
}

Document CacheEngine::generate_once(ViewState& v,
                                    const std::map<std::string, Document>& prepared) {
    GenContext ctx = build_context(v, prepared);
    v.adapter_calls.fetch_add(1);
    Document doc = adapter_generate(v.cfg.adapter, ctx);
    const StructSchema* schema = nullptr;
    if (v.cfg.policy.validation == ValidationMode::Schema && v.cfg.policy.schema_ref) {
        auto it = schemas_.find(*v.cfg.policy.schema_ref);
        if (it != schemas_.end()) schema = &it->second;
    }
    validate_content(doc, v.cfg.policy.validation, schema);
    return doc;
}

CacheEngine::GenResult CacheEngine::generate_with_fallback(
    ViewState& v, const std::map<std::string, Document>& prepared) {
    SourceError error(SourceErrorClass::Unavailable, "");
    try {
        return GenResult{generate_once(v, prepared)};
    } catch (const SourceError& e) {
        error = e;
    }

    const FallbackRule* rule = nullptr;
    for (const FallbackRule& r : v.cfg.fallbacks) {
        if (r.matches(error.cls, error.http_status)) {
            rule = &r;
            break;
        }
    }
    FallbackAction action = rule ? rule->action : FallbackAction::Error;

    if (action == FallbackAction::Retry) {
        for (int attempt = 0; attempt < rule->retries; ++attempt) {
            clock_.sleep_for(rule->backoff_ms);
            try {
                return GenResult{generate_once(v, prepared)};
            } catch (const SourceError& e) {
                error = e;
            }
        }
        action = rule->final_disposition;
    }

    GenResult out;
    out.disposition = action;
    out.error = error.cls;
    out.http_status = error.http_status;
    out.detail = error.what();
    return out;
}

// ---------------------------------------------------------------------------
// Refresh

RefreshOutcome CacheEngine::refresh_view(const std::string& name, RefreshCause cause) {
    return refresh_internal(name, cause, /*cascade=*/true);
}

RefreshOutcome CacheEngine::refresh_internal(const std::string& name, RefreshCause cause,
                                             bool cascade) {
    ViewState& v = state(name);
    RefreshSlot& slot = slot_for(v);

    RefreshOutcome outcome;
    {
        std::unique_lock lock(slot.mutex, std::defer_lock);
        bool trigger_driven = cause == RefreshCause::Interval ||
                              cause == RefreshCause::Expiry ||
                              cause == RefreshCause::Dependency ||
                              cause == RefreshCause::Notification;
        if (trigger_driven && !lock.try_lock()) {
            // a refresh is in flight; coalesce into one pending follow-up
            slot.pending.store(true);
            std::lock_guard wait(slot.mutex);  // surface a settled outcome
            std::lock_guard exp(exposure_mutex_);
            outcome.kind = RefreshOutcome::Kind::Refreshed;
            outcome.generation = v.exposed ? v.exposed->generation : 0;
            return outcome;
        }
        if (!lock.owns_lock()) lock.lock();

        do {
            slot.pending.store(false);
            if (v.cfg.policy.consistency_group) {
                outcome = refresh_group_locked(*v.cfg.policy.consistency_group, name, cause);
            } else {
                outcome = refresh_single_locked(v, cause);
            }
        } while (slot.pending.exchange(false));
    }

    if (cascade && outcome.kind == RefreshOutcome::Kind::Refreshed)
        cascade_dependents(name);
    return outcome;
}

RefreshOutcome CacheEngine::refresh_single_locked(ViewState& v, RefreshCause cause) {
    (void)cause;
    GenResult res = generate_with_fallback(v, {});
    RefreshOutcome out;
    if (res.doc) {
        std::uint64_t gen = v.generation_counter.fetch_add(1) + 1;
        expose(v, std::move(*res.doc), gen, gen);
        out.kind = RefreshOutcome::Kind::Refreshed;
        out.generation = gen;
        return out;
    }
    std::lock_guard lock(exposure_mutex_);
    v.consecutive_failures += 1;
    v.last_error = res.error;
    if (res.disposition == FallbackAction::Ignore) {
        out.kind = RefreshOutcome::Kind::ServedStaleKept;
        out.generation = v.exposed ? v.exposed->generation : 0;
    } else {
        v.poisoned = true;
        out.kind = RefreshOutcome::Kind::Failed;
    }
    out.error = res.error;
    out.http_status = res.http_status;
    out.detail = res.detail;
    return out;
}

RefreshOutcome CacheEngine::refresh_group_locked(const std::string& group,
                                                 const std::string& trigger_view,
                                                 RefreshCause cause) {
    (void)cause;
    std::vector<std::string> members = group_members(group);

    // prepare in dependency order so members see each other's new content
    std::vector<std::string> ordered;
    std::set<std::string> done;
    while (ordered.size() < members.size()) {
        bool progressed = false;
        for (const std::string& m : members) {
            if (done.count(m)) continue;
            const auto& deps = views_.at(m)->cfg.depends_on;
            bool ready = std::all_of(deps.begin(), deps.end(), [&](const std::string& d) {
                return done.count(d) ||
                       std::find(members.begin(), members.end(), d) == members.end();
            });
            if (ready) {
                ordered.push_back(m);
                done.insert(m);
                progressed = true;
            }
        }
        if (!progressed) {  // cycle; config validation rejects this upfront
            for (const std::string& m : members)
                if (!done.count(m)) ordered.push_back(m);
            break;
        }
    }

    std::map<std::string, Document> prepared;
    for (const std::string& name : ordered) {
        ViewState& m = *views_.at(name);
        GenResult res = generate_with_fallback(m, prepared);
        if (!res.doc) {
            // all-or-nothing: abort the swap, every member keeps prior content
            std::lock_guard lock(exposure_mutex_);
            m.consecutive_failures += 1;
            m.last_error = res.error;
            RefreshOutcome out;
            if (res.disposition == FallbackAction::Ignore) {
                out.kind = RefreshOutcome::Kind::ServedStaleKept;
                const ViewState& t = *views_.at(trigger_view);
                out.generation = t.exposed ? t.exposed->generation : 0;
            } else {
                m.poisoned = true;
                out.kind = RefreshOutcome::Kind::Failed;
            }
            out.error = res.error;
            out.http_status = res.http_status;
            out.detail = "group member '" + name + "': " + res.detail;
            return out;
        }
        prepared.emplace(name, std::move(*res.doc));
    }

    swap_group(group, std::move(prepared));

    RefreshOutcome out;
    out.kind = RefreshOutcome::Kind::Refreshed;
    std::lock_guard lock(exposure_mutex_);
    const ViewState& t = *views_.at(trigger_view);
    out.generation = t.exposed ? t.exposed->generation : 0;
    return out;
}

void CacheEngine::swap_group(const std::string& group, std::map<std::string, Document> prepared) {
    std::vector<std::string> members = group_members(group);
    if (members.empty()) throw UnknownViewError("consistency group " + group);
    for (const std::string& m : members) {
        if (!prepared.count(m))
            throw GroupPrepareFailed(m, "no prepared content for this member");
    }

    TimeMs now = clock_.now();
    struct Staged {
        ViewState* view;
        std::shared_ptr<const Document> doc;
        std::uint64_t generation;
    };
    std::vector<Staged> staged;
    for (const std::string& m : members) {
        ViewState& v = *views_.at(m);
        auto doc = std::make_shared<const Document>(std::move(prepared.at(m)));
        std::uint64_t gen = v.generation_counter.fetch_add(1) + 1;
        staged.push_back(Staged{&v, std::move(doc), gen});
    }

    std::uint64_t epoch;
    {
        std::lock_guard lock(exposure_mutex_);
        epoch = ++group_epochs_.at(group);
        for (Staged& s : staged) {
            auto exposed = std::make_shared<Exposed>();
            exposed->doc = s.doc;
            exposed->generation = s.generation;
            exposed->generated_at = now;
            exposed->epoch = epoch;
            s.view->exposed = std::move(exposed);
            s.view->poisoned = false;
            s.view->consecutive_failures = 0;
            s.view->last_error.reset();
        }
    }
    // disk persistence after the swap; restart rebuilds from the last write
    for (const Staged& s : staged) {
        if (s.view->cfg.policy.cache_type == CacheType::Disk)
            persist_disk(*s.view, *s.doc, s.generation, now, epoch);
    }
}

void CacheEngine::expose(ViewState& v, Document doc, std::uint64_t generation,
                         std::uint64_t epoch) {
    TimeMs now = clock_.now();
    auto content = std::make_shared<const Document>(std::move(doc));
    if (v.cfg.policy.cache_type == CacheType::Disk)
        persist_disk(v, *content, generation, now, epoch);

    if (v.cfg.policy.cache_type == CacheType::None) return;  // nothing retained

    auto exposed = std::make_shared<Exposed>();
    exposed->doc = std::move(content);
    exposed->generation = generation;
    exposed->generated_at = now;
    exposed->epoch = epoch;

    std::lock_guard lock(exposure_mutex_);
    v.exposed = std::move(exposed);
    v.poisoned = false;
    v.consecutive_failures = 0;
    v.last_error.reset();
}

void CacheEngine::cascade_dependents(const std::string& name) {
    for (const std::string& dep : plan_dependents(name))
        refresh_internal(dep, RefreshCause::Dependency, /*cascade=*/false);
}

// ---------------------------------------------------------------------------
// Reads

std::pair<Document, ReadMeta> CacheEngine::read_view(const std::string& name) {
    ViewState& v = state(name);

    if (v.cfg.policy.cache_type == CacheType::None) {
        Document doc = generate_once(v, {});  // adapter errors pass through
        ReadMeta meta;
        meta.generation = v.generation_counter.fetch_add(1) + 1;
        meta.generated_at = clock_.now();
        meta.age_ms = 0;
        return {std::move(doc), meta};
    }

    auto grab = [&]() -> std::pair<std::shared_ptr<const Exposed>, bool> {
        std::lock_guard lock(exposure_mutex_);
        return {v.exposed, v.poisoned};
    };

    auto [exposed, poisoned] = grab();
    if (poisoned) throw ViewInError("view '" + name + "' is in error state");

    TimeMs now = clock_.now();
    bool expired = exposed && v.cfg.policy.ttl_ms &&
                   now - exposed->generated_at > *v.cfg.policy.ttl_ms;
    if ((!exposed || expired) && v.cfg.has_trigger(TriggerKind::OnRead)) {
        refresh_internal(name, RefreshCause::Read, /*cascade=*/true);
        std::tie(exposed, poisoned) = grab();
        if (poisoned) throw ViewInError("view '" + name + "' is in error state");
        now = clock_.now();
    }

    if (!exposed) throw ViewInError("view '" + name + "' has no content");
    TimeMs age = now - exposed->generated_at;
    if (v.cfg.policy.ttl_ms && age > *v.cfg.policy.ttl_ms) throw OutdatedCacheError(name);

    ReadMeta meta{exposed->generation, exposed->generated_at, age, exposed->epoch};
    return {*exposed->doc, meta};
}

std::map<std::string, std::pair<Document, ReadMeta>> CacheEngine::read_snapshot(
    const std::vector<std::string>& names) {
    std::vector<std::pair<const ViewState*, std::shared_ptr<const Exposed>>> grabbed;
    TimeMs now = clock_.now();
    {
        std::lock_guard lock(exposure_mutex_);
        for (const std::string& name : names) {
            const ViewState& v = state(name);
            if (v.cfg.policy.cache_type == CacheType::None)
                throw SnapshotUnavailableError("view '" + name + "' is uncached");
            if (v.poisoned)
                throw SnapshotUnavailableError("view '" + name + "' is in error state");
            if (!v.exposed) throw SnapshotUnavailableError("view '" + name + "' has no content");
            TimeMs age = now - v.exposed->generated_at;
            if (v.cfg.policy.ttl_ms && age > *v.cfg.policy.ttl_ms)
                throw SnapshotUnavailableError("view '" + name + "' content is outdated");
            grabbed.emplace_back(&v, v.exposed);
        }
    }
    std::map<std::string, std::pair<Document, ReadMeta>> out;
    for (const auto& [v, exposed] : grabbed) {
        ReadMeta meta{exposed->generation, exposed->generated_at,
                      now - exposed->generated_at, exposed->epoch};
        out.emplace(v->cfg.name, std::make_pair(*exposed->doc, meta));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Triggers

std::vector<std::string> CacheEngine::plan_dependents(const std::string& name) const {
    state(name);  // throws UnknownView

    // edge base -> dependent exists when the dependent declares an
    // on_dependency trigger naming the base
    std::map<std::string, std::vector<std::string>> dependents;
    std::map<std::string, std::vector<std::string>> sources;
    for (const std::string& w : order_) {
        const ViewState& v = *views_.at(w);
        for (const TriggerRule& t : v.cfg.triggers) {
            if (t.kind == TriggerKind::OnDependency) {
                dependents[t.source_view].push_back(w);
                sources[w].push_back(t.source_view);
            }
        }
    }

    std::set<std::string> reachable;
    std::vector<std::string> frontier{name};
    while (!frontier.empty()) {
        std::string cur = frontier.back();
        frontier.pop_back();
        for (const std::string& d : dependents[cur]) {
            if (reachable.insert(d).second) frontier.push_back(d);
        }
    }

    // Kahn's algorithm over the reachable sub-graph, declaration order
    std::vector<std::string> plan;
    std::set<std::string> emitted;
    while (plan.size() < reachable.size()) {
        bool progressed = false;
        for (const std::string& w : order_) {
            if (!reachable.count(w) || emitted.count(w)) continue;
            bool ready = std::all_of(
                sources[w].begin(), sources[w].end(), [&](const std::string& s) {
                    return !reachable.count(s) || emitted.count(s);
                });
            if (ready) {
                plan.push_back(w);
                emitted.insert(w);
                progressed = true;
            }
        }
        if (!progressed) break;  // config validation rejects cycles upfront
    }
    return plan;
}

std::vector<std::string> CacheEngine::notify(const std::string& event_name) {
    std::vector<std::string> triggered;
    std::set<std::string> refreshed_groups;
    for (const std::string& name : order_) {
        const ViewState& v = *views_.at(name);
        bool bound = std::any_of(v.cfg.triggers.begin(), v.cfg.triggers.end(),
                                 [&](const TriggerRule& t) {
                                     return t.kind == TriggerKind::Notification &&
                                            t.event_name == event_name;
                                 });
        if (!bound) continue;
        triggered.push_back(name);
        if (v.cfg.policy.consistency_group) {
            // one swap per group per event, however many members are bound
            if (!refreshed_groups.insert(*v.cfg.policy.consistency_group).second) continue;
        }
        refresh_internal(name, RefreshCause::Notification, /*cascade=*/true);
    }
    return triggered;
}

std::vector<std::pair<std::string, RefreshCause>> CacheEngine::scheduler_tick(TimeMs now) {
    std::vector<std::pair<std::string, RefreshCause>> fired;
    {
        std::lock_guard sched(scheduler_mutex_);
        for (const std::string& name : order_) {
            ViewState& v = *views_.at(name);
            for (std::size_t i = 0; i < v.cfg.triggers.size(); ++i) {
                const TriggerRule& t = v.cfg.triggers[i];
                if (t.kind != TriggerKind::Interval) continue;
                TimeMs last = v.interval_last_fired[i];
                if (last == INT64_MIN || now - last >= t.every_ms) {
                    v.interval_last_fired[i] = now;
                    fired.emplace_back(name, RefreshCause::Interval);
                }
            }
            if (v.cfg.has_trigger(TriggerKind::OnExpiry) && v.cfg.policy.ttl_ms) {
                std::lock_guard exp(exposure_mutex_);
                if (v.exposed && now - v.exposed->generated_at > *v.cfg.policy.ttl_ms &&
                    v.expiry_fired_generation < v.exposed->generation) {
                    v.expiry_fired_generation = v.exposed->generation;
                    fired.emplace_back(name, RefreshCause::Expiry);
                }
            }
        }
    }
    for (const auto& [name, cause] : fired) {
        try {
            refresh_internal(name, cause, /*cascade=*/true);
        } catch (const std::exception&) {
            // refresh outcomes are recorded in view state; ticking continues
        }
    }
    return fired;
}

void CacheEngine::write_view_content(const std::string& name, const Document& doc) {
    ViewState& v = state(name);
    write_view(v.cfg.adapter, doc);  // throws NotWritable for non-file views
    if (v.cfg.has_trigger(TriggerKind::OnWrite))
        refresh_internal(name, RefreshCause::Write, /*cascade=*/true);
}

// ---------------------------------------------------------------------------
// Status & persistence

std::vector<ViewStatus> CacheEngine::list_views() const {
    std::vector<ViewStatus> out;
    TimeMs now = clock_.now();
    std::lock_guard lock(exposure_mutex_);
    for (const std::string& name : order_) {
        const ViewState& v = *views_.at(name);
        ViewStatus st;
        st.name = name;
        st.cache_type = v.cfg.policy.cache_type == CacheType::Memory ? "memory"
                        : v.cfg.policy.cache_type == CacheType::Disk ? "disk"
                                                                     : "none";
        st.group = v.cfg.policy.consistency_group.value_or("");
        st.adapter_calls = v.adapter_calls.load();
        if (v.poisoned) {
            st.state = "error";
            if (v.exposed) st.generation = v.exposed->generation;
        } else if (v.exposed) {
            st.state = "exposed";
            st.generation = v.exposed->generation;
            st.age_ms = now - v.exposed->generated_at;
        } else {
            st.state = "empty";
        }
        out.push_back(std::move(st));
    }
    return out;
}

void CacheEngine::persist_disk(const ViewState& v, const Document& doc,
                               std::uint64_t generation, TimeMs generated_at,
                               std::uint64_t epoch) {
    const std::string& path = *v.cfg.policy.disk_path;
    std::error_code ec;
    fs::create_directories(fs::path(path).parent_path(), ec);

    auto atomic_write = [](const std::string& target, const std::string& content) {
        std::string tmp = target + ".tmp";
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp);
        out << content;
        out.close();
        std::error_code rec;
        fs::rename(tmp, target, rec);
        if (rec) throw IoError("rename failed for " + target + ": " + rec.message());
    };

    atomic_write(path, doc_serialize(doc, DocFormat::Xml));
    json meta{{"generation", generation},
              {"generated_at", format_rfc3339(generated_at)},
              {"generated_at_ms", generated_at},
              {"epoch", epoch}};
    atomic_write(path + ".meta.json", meta.dump() + "\n");
}

void CacheEngine::restore_disk_caches() {
    for (const std::string& name : order_) {
        ViewState& v = *views_.at(name);
        if (v.cfg.policy.cache_type != CacheType::Disk) continue;
        const std::string& path = *v.cfg.policy.disk_path;
        std::ifstream content(path, std::ios::binary);
        std::ifstream metafile(path + ".meta.json");
        if (!content || !metafile) continue;
        try {
            std::string body((std::istreambuf_iterator<char>(content)),
                             std::istreambuf_iterator<char>());
            json meta = json::parse(metafile);
            auto exposed = std::make_shared<Exposed>();
            exposed->doc = std::make_shared<const Document>(doc_parse(body, DocFormat::Xml));
            exposed->generation = meta.at("generation").get<std::uint64_t>();
            exposed->generated_at = meta.value("generated_at_ms", TimeMs{0});
            exposed->epoch = meta.value("epoch", std::uint64_t{0});
            v.generation_counter.store(exposed->generation);
            if (v.cfg.policy.consistency_group) {
                auto& epoch = group_epochs_.at(*v.cfg.policy.consistency_group);
                epoch = std::max(epoch, exposed->epoch);
            }
            v.exposed = std::move(exposed);
        } catch (const std::exception&) {
            // unreadable cache file; start empty and regenerate on demand
        }
    }
}

}  // namespace viewfed
