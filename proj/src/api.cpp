#include "viewfed/api.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "viewfed/transform.hpp"

namespace viewfed {

using ordered_json = nlohmann::ordered_json;

namespace {

DocFormat negotiate(const httplib::Request& req) {
    std::string accept = req.get_header_value("Accept");
    if (accept.find("application/json") != std::string::npos) return DocFormat::Json;
    return DocFormat::Xml;  // default
}

const char* content_type(DocFormat f) {
    return f == DocFormat::Xml ? "application/xml" : "application/json";
}

void api_error(httplib::Response& res, int status, const std::string& code,
               const std::string& detail) {
    ordered_json body{{"code", code}, {"detail", detail}};
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

// Fixed code<->status table:
//   UNKNOWN_VIEW 404, OUTDATED_CACHE 503, VIEW_IN_ERROR 502,
//   SNAPSHOT_UNAVAILABLE 409, BAD_TRANSFORM 400, NOT_WRITABLE 405,
//   SOURCE_ERROR 502
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
    try {
        fn();
    } catch (const UnknownViewError& e) {
        api_error(res, 404, "UNKNOWN_VIEW", e.what());
    } catch (const OutdatedCacheError& e) {
        api_error(res, 503, "OUTDATED_CACHE", e.what());
    } catch (const ViewInError& e) {
        api_error(res, 502, "VIEW_IN_ERROR", e.what());
    } catch (const SnapshotUnavailableError& e) {
        api_error(res, 409, "SNAPSHOT_UNAVAILABLE", e.what());
    } catch (const TransformError& e) {
        api_error(res, 400, "BAD_TRANSFORM", e.what());
    } catch (const NotWritableError& e) {
        api_error(res, 405, "NOT_WRITABLE", e.what());
    } catch (const SourceError& e) {
        api_error(res, 502, "SOURCE_ERROR", e.what());
    } catch (const std::exception& e) {
        api_error(res, 500, "INTERNAL", e.what());
    }
}

void set_meta_headers(httplib::Response& res, const ReadMeta& meta) {
    res.set_header("X-Generation", std::to_string(meta.generation));
    res.set_header("X-Generated-At", format_rfc3339(meta.generated_at));
    res.set_header("X-Age-Ms", std::to_string(meta.age_ms));
}

}  // namespace

ApiServer::ApiServer(CacheEngine& engine)
    : engine_(engine), server_(std::make_unique<httplib::Server>()) {
    route();
}

ApiServer::~ApiServer() { stop(); }

void ApiServer::route() {
    auto& svr = *server_;

    svr.Get("/views", [this](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] {
            ordered_json out = ordered_json::array();
            for (const ViewStatus& v : engine_.list_views()) {
                ordered_json entry{{"name", v.name},
                                   {"cache_type", v.cache_type},
                                   {"state", v.state},
                                   {"generation", v.generation},
                                   {"age_ms", v.age_ms},
                                   {"group", v.group},
                                   {"adapter_calls", v.adapter_calls}};
                out.push_back(std::move(entry));
            }
            res.set_content(out.dump(), "application/json");
        });
    });

    svr.Get("/views/([^/]+)", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto [doc, meta] = engine_.read_view(req.matches[1]);
            DocFormat fmt = negotiate(req);
            set_meta_headers(res, meta);
            res.set_content(doc_serialize(doc, fmt), content_type(fmt));
        });
    });

    svr.Post("/views/([^/]+)/refresh", [this](const httplib::Request& req,
                                              httplib::Response& res) {
        guarded(res, [&] {
            RefreshOutcome outcome = engine_.refresh_view(req.matches[1], RefreshCause::Manual);
            if (outcome.kind == RefreshOutcome::Kind::Failed) {
                api_error(res, 502, "SOURCE_ERROR",
                          outcome.detail.empty() ? "refresh failed" : outcome.detail);
                return;
            }
            ordered_json body;
            body["outcome"] = outcome.kind == RefreshOutcome::Kind::Refreshed
                                  ? "refreshed"
                                  : "served_stale_kept";
            body["generation"] = outcome.generation;
            res.set_content(body.dump(), "application/json");
        });
    });

    svr.Post("/views/([^/]+)/transform", [this](const httplib::Request& req,
                                                httplib::Response& res) {
        guarded(res, [&] {
            TransformTemplate tpl;
            try {
                tpl = transform_parse(doc_parse(req.body, DocFormat::Xml));
            } catch (const ParseError& e) {
                throw TransformError(std::string("template does not parse: ") + e.what());
            }
            auto [doc, meta] = engine_.read_view(req.matches[1]);
            Document transformed = transform_apply(doc, tpl);
            DocFormat fmt = negotiate(req);
            set_meta_headers(res, meta);
            res.set_content(doc_serialize(transformed, fmt), content_type(fmt));
        });
    });

    svr.Put("/views/([^/]+)", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            std::string name = req.matches[1];
            if (!engine_.has_view(name)) throw UnknownViewError(name);
            DocFormat fmt = req.get_header_value("Content-Type").find("json") !=
                                    std::string::npos
                                ? DocFormat::Json
                                : DocFormat::Xml;
            Document doc;
            try {
                doc = doc_parse(req.body, fmt);
            } catch (const ParseError& e) {
                api_error(res, 400, "BAD_TRANSFORM", std::string("body does not parse: ") + e.what());
                return;
            }
            engine_.write_view_content(name, doc);
            res.status = 204;
        });
    });

    svr.Post("/notify/([^/]+)", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            ordered_json body;
            body["triggered"] = engine_.notify(req.matches[1]);
            res.set_content(body.dump(), "application/json");
        });
    });

    svr.Get("/snapshot", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            std::vector<std::string> names;
            std::string param = req.get_param_value("views");
            std::size_t pos = 0;
            while (pos <= param.size() && !param.empty()) {
                auto comma = param.find(',', pos);
                names.push_back(param.substr(pos, comma == std::string::npos ? std::string::npos
                                                                             : comma - pos));
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            auto snapshot = engine_.read_snapshot(names);
            ordered_json out = ordered_json::object();
            for (const auto& [name, entry] : snapshot) {
                const auto& [doc, meta] = entry;
                out[name] = ordered_json{
                    {"content", ordered_json::parse(doc_serialize(doc, DocFormat::Json))},
                    {"generation", meta.generation},
                    {"epoch", meta.epoch}};
            }
            res.set_content(out.dump(), "application/json");
        });
    });
}

int ApiServer::start(const std::string& host, int port) {
    if (port == 0) {
        port_ = server_->bind_to_any_port(host);
        if (port_ < 0) throw IoError("cannot bind to " + host);
    } else {
        if (!server_->bind_to_port(host, port)) {
            throw IoError("cannot bind to " + host + ":" + std::to_string(port));
        }
        port_ = port;
    }
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port_;
}

void ApiServer::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

}  // namespace viewfed
