#include "viewfed/config.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include <nlohmann/json.hpp>

#include "viewfed/vpath.hpp"

namespace viewfed {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string interpolate(std::string path, const std::string& data_dir) {
    const std::string token = "${DATA_DIR}";
    for (auto pos = path.find(token); pos != std::string::npos; pos = path.find(token))
        path.replace(pos, token.size(), data_dir);
    return path;
}

[[noreturn]] void bad(const std::string& msg) { throw ConfigSyntaxError(msg); }

std::string require_string(const ordered_json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_string())
        bad(where + ": missing or non-string field '" + key + "'");
    return j[key].get<std::string>();
}

CachePolicy parse_cache(const ordered_json& j, const std::string& where,
                        const std::string& data_dir) {
    CachePolicy p;
    if (j.is_null()) return p;
    std::string type = j.value("type", "memory");
    if (type == "memory") p.cache_type = CacheType::Memory;
    else if (type == "disk") p.cache_type = CacheType::Disk;
    else if (type == "none") p.cache_type = CacheType::None;
    else bad(where + ": unknown cache type '" + type + "'");

    if (j.contains("disk_path"))
        p.disk_path = interpolate(j["disk_path"].get<std::string>(), data_dir);
    if (j.contains("ttl_ms")) p.ttl_ms = j["ttl_ms"].get<TimeMs>();
    p.update_timeout_ms = j.value("timeout_ms", TimeMs{10000});

    std::string validation = j.value("validation", "none");
    if (validation == "none") p.validation = ValidationMode::None;
    else if (validation == "wellformed") p.validation = ValidationMode::WellFormed;
    else if (validation == "schema") p.validation = ValidationMode::Schema;
    else bad(where + ": unknown validation mode '" + validation + "'");

    if (j.contains("schema")) p.schema_ref = j["schema"].get<std::string>();
    if (j.contains("group")) p.consistency_group = j["group"].get<std::string>();
    return p;
}

AdapterSpec parse_adapter(const ordered_json& j, const std::string& where,
                          const std::string& data_dir) {
    std::string kind = require_string(j, "kind", where);
    if (kind == "file") {
        FileAdapter a;
        a.path = interpolate(require_string(j, "path", where), data_dir);
        std::string fmt = j.value("format", "xml");
        if (fmt == "xml") a.format = FileFormat::Xml;
        else if (fmt == "json") a.format = FileFormat::Json;
        else if (fmt == "csv") a.format = FileFormat::Csv;
        else bad(where + ": unknown file format '" + fmt + "'");
        a.writable = j.value("writable", false);
        return AdapterSpec{a};
    }
    if (kind == "http") {
        HttpAdapter a;
        a.url = require_string(j, "url", where);
        if (j.contains("headers")) {
            for (const auto& [k, v] : j["headers"].items())
                a.headers.emplace(k, v.get<std::string>());
        }
        a.expect_format = parse_format(j.value("expect_format", "xml"));
        return AdapterSpec{a};
    }
    if (kind == "table") {
        TableAdapter a;
        a.path = interpolate(require_string(j, "path", where), data_dir);
        std::string delim = j.value("delimiter", ",");
        if (delim.size() != 1) bad(where + ": delimiter must be a single character");
        a.delimiter = delim[0];
        a.has_header = j.value("has_header", true);
        a.table_element = j.value("table_element", "table");
        a.row_element = j.value("row_element", "row");
        return AdapterSpec{a};
    }
    if (kind == "derived") {
        DerivedAdapter a;
        if (!j.contains("base_views") || !j["base_views"].is_array())
            bad(where + ": derived adapter requires base_views array");
        for (const auto& b : j["base_views"]) a.base_views.push_back(b.get<std::string>());
        std::string tpl = require_string(j, "transform", where);
        try {
            a.transform = transform_parse(doc_parse(tpl, DocFormat::Xml));
        } catch (const std::exception& e) {
            bad(where + ": bad transform template: " + e.what());
        }
        return AdapterSpec{a};
    }
    bad(where + ": unknown adapter kind '" + kind + "'");
}

TriggerRule parse_trigger(const ordered_json& j, const std::string& where) {
    TriggerRule t;
    std::string kind = require_string(j, "kind", where);
    if (kind == "interval") {
        t.kind = TriggerKind::Interval;
        if (!j.contains("every_ms")) bad(where + ": interval trigger requires every_ms");
        t.every_ms = j["every_ms"].get<TimeMs>();
    } else if (kind == "notification") {
        t.kind = TriggerKind::Notification;
        t.event_name = require_string(j, "event", where);
    } else if (kind == "on_read") {
        t.kind = TriggerKind::OnRead;
    } else if (kind == "on_write") {
        t.kind = TriggerKind::OnWrite;
    } else if (kind == "on_expiry") {
        t.kind = TriggerKind::OnExpiry;
    } else if (kind == "on_dependency") {
        t.kind = TriggerKind::OnDependency;
        t.source_view = require_string(j, "source", where);
    } else {
        bad(where + ": unknown trigger kind '" + kind + "'");
    }
    return t;
}

FallbackRule parse_fallback(const ordered_json& j, const std::string& where) {
    FallbackRule r;
    std::string match = require_string(j, "match", where);
    if (match == "source_unavailable") r.match = FallbackMatch::SourceUnavailable;
    else if (match == "source_timeout") r.match = FallbackMatch::SourceTimeout;
    else if (match == "http_status") r.match = FallbackMatch::HttpStatus;
    else if (match == "source_malformed") r.match = FallbackMatch::SourceMalformed;
    else if (match == "validation_error") r.match = FallbackMatch::ValidationError;
    else if (match == "any") r.match = FallbackMatch::Any;
    else bad(where + ": unknown fallback match '" + match + "'");

    if (j.contains("status_range")) {
        const auto& range = j["status_range"];
        if (!range.is_array() || range.size() != 2)
            bad(where + ": status_range must be [lo, hi]");
        r.status_lo = range[0].get<int>();
        r.status_hi = range[1].get<int>();
    }

    std::string action = require_string(j, "action", where);
    if (action == "ignore") r.action = FallbackAction::Ignore;
    else if (action == "error") r.action = FallbackAction::Error;
    else if (action == "retry") r.action = FallbackAction::Retry;
    else bad(where + ": unknown fallback action '" + action + "'");

    r.retries = j.value("retries", 0);
    r.backoff_ms = j.value("backoff_ms", TimeMs{0});
    std::string final_disposition = j.value("final", "error");
    if (final_disposition == "ignore") r.final_disposition = FallbackAction::Ignore;
    else if (final_disposition == "error") r.final_disposition = FallbackAction::Error;
    else bad(where + ": fallback 'final' must be ignore or error");
    return r;
}

StructSchema parse_schema(const ordered_json& j, const std::string& where) {
    StructSchema s;
    s.root = require_string(j, "root", where);
    if (!j.contains("elements") || !j["elements"].is_object())
        bad(where + ": schema requires an elements object");
    for (const auto& [name, rule_json] : j["elements"].items()) {
        ElementRule rule;
        if (rule_json.contains("required_attrs")) {
            for (const auto& a : rule_json["required_attrs"])
                rule.required_attrs.insert(a.get<std::string>());
        }
        if (rule_json.contains("children")) {
            for (const auto& [child, card] : rule_json["children"].items()) {
                std::string c = card.get<std::string>();
                if (c == "one") rule.allowed_children[child] = Cardinality::One;
                else if (c == "many") rule.allowed_children[child] = Cardinality::Many;
                else if (c == "optional") rule.allowed_children[child] = Cardinality::Optional;
                else bad(where + ": unknown cardinality '" + c + "'");
            }
        }
        rule.allow_text = rule_json.value("allow_text", false);
        s.rules[name] = std::move(rule);
    }
    return s;
}

JoinSpec parse_join(const ordered_json& j, const std::string& where) {
    JoinSpec spec;
    spec.name = require_string(j, "name", where);
    if (!j.contains("sources") || !j["sources"].is_array() || j["sources"].empty())
        bad(where + ": join requires a non-empty sources array");
    for (const auto& src : j["sources"]) {
        JoinSource s;
        s.view = require_string(src, "view", where);
        s.record_path = require_string(src, "records", where);
        s.key_path = require_string(src, "key", where);
        spec.sources.push_back(std::move(s));
    }
    spec.key_attr = j.value("key_attr", "name");
    spec.output_root = j.value("output_root", "sites");
    spec.entry_element = j.value("entry_element", "site");
    return spec;
}

}  // namespace

ViewConfig site_view_config(const JoinSpec& spec, const CachePolicy& policy) {
    ViewConfig cfg;
    cfg.name = spec.name;
    cfg.adapter = AdapterSpec{JoinAdapter{spec}};
    cfg.policy = policy;
    for (const JoinSource& src : spec.sources) {
        TriggerRule t;
        t.kind = TriggerKind::OnDependency;
        t.source_view = src.view;
        cfg.triggers.push_back(t);
        cfg.depends_on.push_back(src.view);
    }
    return cfg;
}

std::vector<ViewConfig> ServiceConfig::expanded_views() const {
    std::vector<ViewConfig> out = views;
    for (const JoinSpec& j : joins) {
        auto it = join_policies.find(j.name);
        out.push_back(site_view_config(j, it == join_policies.end() ? CachePolicy{} : it->second));
    }
    return out;
}

ServiceConfig config_load(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw ConfigSyntaxError(e.what());
    }

    ServiceConfig cfg;
    try {
        if (!j.is_object()) bad("top level must be an object");
        if (j.contains("listen")) {
            std::string listen = j["listen"].get<std::string>();
            auto colon = listen.rfind(':');
            if (colon == std::string::npos) bad("listen must be host:port");
            cfg.listen_host = listen.substr(0, colon);
            try {
                cfg.listen_port = std::stoi(listen.substr(colon + 1));
            } catch (const std::exception&) {
                bad("listen port is not a number");
            }
        }
        cfg.data_dir = j.value("data_dir", ".");

        if (j.contains("schemas")) {
            for (const auto& [name, schema] : j["schemas"].items())
                cfg.schemas[name] = parse_schema(schema, "schema '" + name + "'");
        }
        if (j.contains("views")) {
            if (!j["views"].is_array()) bad("views must be an array");
            for (const auto& vj : j["views"]) {
                ViewConfig v;
                v.name = require_string(vj, "name", "view");
                std::string where = "view '" + v.name + "'";
                if (!vj.contains("adapter")) bad(where + ": missing adapter");
                v.adapter = parse_adapter(vj["adapter"], where, cfg.data_dir);
                v.policy = parse_cache(vj.contains("cache") ? vj["cache"] : ordered_json(),
                                       where, cfg.data_dir);
                if (vj.contains("triggers")) {
                    for (const auto& t : vj["triggers"]) v.triggers.push_back(parse_trigger(t, where));
                }
                if (vj.contains("fallbacks")) {
                    for (const auto& f : vj["fallbacks"])
                        v.fallbacks.push_back(parse_fallback(f, where));
                }
                if (vj.contains("depends_on")) {
                    for (const auto& d : vj["depends_on"]) v.depends_on.push_back(d.get<std::string>());
                }
                // adapter bases are dependencies whether or not declared
                for (const std::string& base : v.adapter.base_views()) {
                    if (std::find(v.depends_on.begin(), v.depends_on.end(), base) ==
                        v.depends_on.end())
                        v.depends_on.push_back(base);
                }
                cfg.views.push_back(std::move(v));
            }
        }
        if (j.contains("joins")) {
            if (!j["joins"].is_array()) bad("joins must be an array");
            for (const auto& jj : j["joins"]) {
                JoinSpec spec = parse_join(jj, "join");
                if (jj.contains("cache"))
                    cfg.join_policies[spec.name] =
                        parse_cache(jj["cache"], "join '" + spec.name + "'", cfg.data_dir);
                cfg.joins.push_back(std::move(spec));
            }
        }
    } catch (const ConfigSyntaxError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigSyntaxError(e.what());
    }

    std::vector<std::string> issues = config_validate(cfg);
    if (!issues.empty()) throw ConfigSemanticError(std::move(issues));
    return cfg;
}

namespace {

// Reports one full cycle path per strongly connected component.
void find_cycles(const std::map<std::string, std::vector<std::string>>& deps,
                 const std::vector<std::string>& order, std::vector<std::string>& out) {
    std::set<std::string> done;
    for (const std::string& start : order) {
        if (done.count(start)) continue;
        std::vector<std::string> stack;
        std::set<std::string> on_stack;
        bool found = false;
        std::function<void(const std::string&)> visit = [&](const std::string& node) {
            if (found || done.count(node)) return;
            if (on_stack.count(node)) {
                auto it = std::find(stack.begin(), stack.end(), node);
                std::string path;
                for (; it != stack.end(); ++it) path += *it + " -> ";
                out.push_back("dependency cycle: " + path + node);
                found = true;
                return;
            }
            stack.push_back(node);
            on_stack.insert(node);
            auto dit = deps.find(node);
            if (dit != deps.end()) {
                for (const std::string& next : dit->second) visit(next);
            }
            stack.pop_back();
            on_stack.erase(node);
            done.insert(node);
        };
        visit(start);
    }
}

}  // namespace

std::vector<std::string> config_validate(const ServiceConfig& cfg) {
    std::vector<std::string> errors;
    std::vector<ViewConfig> all = cfg.expanded_views();

    std::set<std::string> names;
    for (const ViewConfig& v : all) {
        if (!names.insert(v.name).second)
            errors.push_back("duplicate view name: " + v.name);
    }

    for (const ViewConfig& v : all) {
        const std::string where = "view '" + v.name + "'";
        const CachePolicy& p = v.policy;

        if (p.cache_type == CacheType::Disk && !p.disk_path)
            errors.push_back(where + ": cache type disk requires disk_path");
        if (p.validation == ValidationMode::Schema) {
            if (!p.schema_ref) {
                errors.push_back(where + ": schema validation requires a schema reference");
            } else if (!cfg.schemas.count(*p.schema_ref)) {
                errors.push_back(where + ": unresolved schema reference '" + *p.schema_ref + "'");
            }
        }
        if (p.cache_type == CacheType::None) {
            if (p.ttl_ms) errors.push_back(where + ": cache type none forbids ttl");
            if (p.consistency_group)
                errors.push_back(where + ": cache type none forbids consistency group");
        }

        if (v.adapter.kind() == "derived" && v.adapter.base_views().empty())
            errors.push_back(where + ": derived adapter requires at least one base view");
        if (const auto* f = std::get_if<FileAdapter>(&v.adapter.impl)) {
            if (f->format == FileFormat::Csv && f->writable)
                errors.push_back(where + ": csv file adapters are read-only");
        }
        if (const auto* h = std::get_if<HttpAdapter>(&v.adapter.impl)) {
            if (h->url.rfind("http://", 0) != 0 && h->url.rfind("https://", 0) != 0)
                errors.push_back(where + ": http adapter url must be http(s)");
        }

        for (const std::string& dep : v.depends_on) {
            if (!names.count(dep))
                errors.push_back(where + ": unresolved dependency '" + dep + "'");
        }
        for (const TriggerRule& t : v.triggers) {
            if (t.kind == TriggerKind::OnDependency &&
                std::find(v.depends_on.begin(), v.depends_on.end(), t.source_view) ==
                    v.depends_on.end())
                errors.push_back(where + ": on_dependency trigger names '" + t.source_view +
                                 "' which is not a declared dependency");
            if (t.kind == TriggerKind::Interval && t.every_ms <= 0)
                errors.push_back(where + ": interval trigger period must be positive");
        }
        for (const FallbackRule& r : v.fallbacks) {
            if (r.action == FallbackAction::Retry && r.retries < 1)
                errors.push_back(where + ": retry fallback requires retries >= 1");
        }
    }

    // group sanity: members share cacheability and any interval periods agree
    std::map<std::string, std::vector<const ViewConfig*>> groups;
    for (const ViewConfig& v : all) {
        if (v.policy.consistency_group) groups[*v.policy.consistency_group].push_back(&v);
    }
    for (const auto& [group, members] : groups) {
        std::set<TimeMs> periods;
        for (const ViewConfig* m : members) {
            for (const TriggerRule& t : m->triggers) {
                if (t.kind == TriggerKind::Interval) periods.insert(t.every_ms);
            }
        }
        if (periods.size() > 1)
            errors.push_back("group '" + group +
                             "': members declare conflicting interval periods");
    }

    for (const JoinSpec& join : cfg.joins) {
        const std::string where = "join '" + join.name + "'";
        std::set<std::string> declared;
        for (const ViewConfig& v : cfg.views) declared.insert(v.name);
        for (const JoinSource& s : join.sources) {
            if (!declared.count(s.view))
                errors.push_back(where + ": unknown source view '" + s.view + "'");
            try {
                vpath_parse(s.record_path);
                vpath_parse(s.key_path);
            } catch (const PathSyntaxError& e) {
                errors.push_back(where + ": " + e.what());
            }
        }
        if (!valid_element_name(join.output_root) || !valid_element_name(join.entry_element) ||
            !valid_attribute_name(join.key_attr))
            errors.push_back(where + ": invalid output element or attribute name");
    }

    std::map<std::string, std::vector<std::string>> deps;
    std::vector<std::string> order;
    for (const ViewConfig& v : all) {
        order.push_back(v.name);
        deps[v.name] = v.depends_on;
    }
    find_cycles(deps, order, errors);

    return errors;
}

std::string config_dump(const ServiceConfig& cfg) {
    ordered_json j;
    j["listen"] = cfg.listen_host + ":" + std::to_string(cfg.listen_port);
    j["data_dir"] = cfg.data_dir;

    if (!cfg.schemas.empty()) {
        ordered_json schemas = ordered_json::object();
        for (const auto& [name, s] : cfg.schemas) {
            ordered_json elements = ordered_json::object();
            for (const auto& [el, rule] : s.rules) {
                ordered_json r;
                r["required_attrs"] = rule.required_attrs;
                ordered_json children = ordered_json::object();
                for (const auto& [child, card] : rule.allowed_children) {
                    children[child] = card == Cardinality::One       ? "one"
                                      : card == Cardinality::Many    ? "many"
                                                                     : "optional";
                }
                r["children"] = std::move(children);
                r["allow_text"] = rule.allow_text;
                elements[el] = std::move(r);
            }
            schemas[name] = ordered_json{{"root", s.root}, {"elements", std::move(elements)}};
        }
        j["schemas"] = std::move(schemas);
    }

    ordered_json views = ordered_json::array();
    for (const ViewConfig& v : cfg.views) {
        ordered_json vj;
        vj["name"] = v.name;

        ordered_json adapter;
        if (const auto* f = std::get_if<FileAdapter>(&v.adapter.impl)) {
            adapter["kind"] = "file";
            adapter["path"] = f->path;
            adapter["format"] = f->format == FileFormat::Xml    ? "xml"
                                : f->format == FileFormat::Json ? "json"
                                                                : "csv";
            adapter["writable"] = f->writable;
        } else if (const auto* h = std::get_if<HttpAdapter>(&v.adapter.impl)) {
            adapter["kind"] = "http";
            adapter["url"] = h->url;
            if (!h->headers.empty()) adapter["headers"] = h->headers;
            adapter["expect_format"] = to_string(h->expect_format);
        } else if (const auto* t = std::get_if<TableAdapter>(&v.adapter.impl)) {
            adapter["kind"] = "table";
            adapter["path"] = t->path;
            adapter["delimiter"] = std::string(1, t->delimiter);
            adapter["has_header"] = t->has_header;
            adapter["table_element"] = t->table_element;
            adapter["row_element"] = t->row_element;
        } else if (const auto* d = std::get_if<DerivedAdapter>(&v.adapter.impl)) {
            adapter["kind"] = "derived";
            adapter["base_views"] = d->base_views;
            adapter["transform"] = doc_serialize(d->transform.body, DocFormat::Xml);
        }
        vj["adapter"] = std::move(adapter);

        ordered_json cache;
        cache["type"] = v.policy.cache_type == CacheType::Memory ? "memory"
                        : v.policy.cache_type == CacheType::Disk ? "disk"
                                                                 : "none";
        if (v.policy.disk_path) cache["disk_path"] = *v.policy.disk_path;
        if (v.policy.ttl_ms) cache["ttl_ms"] = *v.policy.ttl_ms;
        cache["timeout_ms"] = v.policy.update_timeout_ms;
        cache["validation"] = v.policy.validation == ValidationMode::None        ? "none"
                              : v.policy.validation == ValidationMode::WellFormed ? "wellformed"
                                                                                  : "schema";
        if (v.policy.schema_ref) cache["schema"] = *v.policy.schema_ref;
        if (v.policy.consistency_group) cache["group"] = *v.policy.consistency_group;
        vj["cache"] = std::move(cache);

        if (!v.triggers.empty()) {
            ordered_json triggers = ordered_json::array();
            for (const TriggerRule& t : v.triggers) {
                ordered_json tj;
                switch (t.kind) {
                    case TriggerKind::Interval:
                        tj["kind"] = "interval";
                        tj["every_ms"] = t.every_ms;
                        break;
                    case TriggerKind::Notification:
                        tj["kind"] = "notification";
                        tj["event"] = t.event_name;
                        break;
                    case TriggerKind::OnRead: tj["kind"] = "on_read"; break;
                    case TriggerKind::OnWrite: tj["kind"] = "on_write"; break;
                    case TriggerKind::OnExpiry: tj["kind"] = "on_expiry"; break;
                    case TriggerKind::OnDependency:
                        tj["kind"] = "on_dependency";
                        tj["source"] = t.source_view;
                        break;
                }
                triggers.push_back(std::move(tj));
            }
            vj["triggers"] = std::move(triggers);
        }

        if (!v.fallbacks.empty()) {
            ordered_json fallbacks = ordered_json::array();
            for (const FallbackRule& r : v.fallbacks) {
                ordered_json fj;
                switch (r.match) {
                    case FallbackMatch::SourceUnavailable: fj["match"] = "source_unavailable"; break;
                    case FallbackMatch::SourceTimeout: fj["match"] = "source_timeout"; break;
                    case FallbackMatch::HttpStatus:
                        fj["match"] = "http_status";
                        fj["status_range"] = {r.status_lo, r.status_hi};
                        break;
                    case FallbackMatch::SourceMalformed: fj["match"] = "source_malformed"; break;
                    case FallbackMatch::ValidationError: fj["match"] = "validation_error"; break;
                    case FallbackMatch::Any: fj["match"] = "any"; break;
                }
                fj["action"] = r.action == FallbackAction::Ignore  ? "ignore"
                               : r.action == FallbackAction::Error ? "error"
                                                                   : "retry";
                if (r.action == FallbackAction::Retry) {
                    fj["retries"] = r.retries;
                    fj["backoff_ms"] = r.backoff_ms;
                    fj["final"] =
                        r.final_disposition == FallbackAction::Ignore ? "ignore" : "error";
                }
                fallbacks.push_back(std::move(fj));
            }
            vj["fallbacks"] = std::move(fallbacks);
        }

        if (!v.depends_on.empty()) vj["depends_on"] = v.depends_on;
        views.push_back(std::move(vj));
    }
    j["views"] = std::move(views);

    if (!cfg.joins.empty()) {
        ordered_json joins = ordered_json::array();
        for (const JoinSpec& join : cfg.joins) {
            ordered_json jj;
            jj["name"] = join.name;
            ordered_json sources = ordered_json::array();
            for (const JoinSource& s : join.sources) {
                sources.push_back(
                    ordered_json{{"view", s.view}, {"records", s.record_path}, {"key", s.key_path}});
            }
            jj["sources"] = std::move(sources);
            jj["key_attr"] = join.key_attr;
            jj["output_root"] = join.output_root;
            jj["entry_element"] = join.entry_element;
            auto pit = cfg.join_policies.find(join.name);
            if (pit != cfg.join_policies.end()) {
                const CachePolicy& p = pit->second;
                ordered_json cache;
                cache["type"] = p.cache_type == CacheType::Memory ? "memory"
                                : p.cache_type == CacheType::Disk ? "disk"
                                                                  : "none";
                if (p.disk_path) cache["disk_path"] = *p.disk_path;
                if (p.ttl_ms) cache["ttl_ms"] = *p.ttl_ms;
                cache["timeout_ms"] = p.update_timeout_ms;
                cache["validation"] = p.validation == ValidationMode::None ? "none"
                                      : p.validation == ValidationMode::WellFormed
                                          ? "wellformed"
                                          : "schema";
                if (p.schema_ref) cache["schema"] = *p.schema_ref;
                if (p.consistency_group) cache["group"] = *p.consistency_group;
                jj["cache"] = std::move(cache);
            }
            joins.push_back(std::move(jj));
        }
        j["joins"] = std::move(joins);
    }

    return j.dump(2);
}

}  // namespace viewfed
