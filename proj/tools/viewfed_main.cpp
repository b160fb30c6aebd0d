#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "viewfed/api.hpp"
#include "viewfed/cache.hpp"
#include "viewfed/config.hpp"
#include "viewfed/transform.hpp"

namespace {

// Exit codes: 0 ok, 1 source, 2 config, 3 bind, 4 unknown view, 5 transform.
constexpr int kExitSource = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBind = 3;
constexpr int kExitUnknownView = 4;
constexpr int kExitTransform = 5;

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop.store(true); }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

viewfed::ServiceConfig load_or_exit(const std::string& path) {
    try {
        return viewfed::config_load(slurp(path));
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        std::exit(kExitConfig);
    }
}

int cmd_serve(const std::string& config_path) {
    viewfed::ServiceConfig cfg = load_or_exit(config_path);
    static viewfed::SystemClock clock;
    viewfed::CacheEngine engine(cfg.expanded_views(), cfg.schemas, clock);
    viewfed::ApiServer api(engine);
    try {
        api.start(cfg.listen_host, cfg.listen_port);
    } catch (const viewfed::IoError& e) {
        std::cerr << e.what() << "\n";
        return kExitBind;
    }
    std::cerr << "serving " << cfg.expanded_views().size() << " views on " << cfg.listen_host
              << ":" << api.port() << "\n";

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::thread scheduler([&] {
        while (!g_stop.load()) {
            engine.scheduler_tick(clock.now());
            std::this_thread::sleep_for(std::chrono::milliseconds(25));
        }
    });
    while (!g_stop.load()) std::this_thread::sleep_for(std::chrono::milliseconds(50));
    scheduler.join();
    api.stop();
    return 0;
}

int cmd_check(const std::string& config_path) {
    std::string text;
    try {
        text = slurp(config_path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }
    try {
        viewfed::ServiceConfig cfg = viewfed::config_load(text);
        std::cout << "OK: " << cfg.views.size() << " views, " << cfg.joins.size() << " joins\n";
        return 0;
    } catch (const viewfed::ConfigSemanticError& e) {
        for (const std::string& issue : e.issues) std::cerr << issue << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }
}

// One-shot commands always regenerate; cache and ttl behavior belongs to the
// server. Disk and group policies are neutralized before building the engine.
viewfed::CacheEngine one_shot_engine(const viewfed::ServiceConfig& cfg,
                                     viewfed::Clock& clock) {
    std::vector<viewfed::ViewConfig> views = cfg.expanded_views();
    for (viewfed::ViewConfig& v : views) {
        if (v.policy.cache_type != viewfed::CacheType::None)
            v.policy.cache_type = viewfed::CacheType::Memory;
        v.policy.disk_path.reset();
        v.policy.ttl_ms.reset();
        v.policy.consistency_group.reset();
    }
    return viewfed::CacheEngine(std::move(views), cfg.schemas, clock);
}

int build_view(viewfed::CacheEngine& engine, const std::string& view,
               viewfed::Document& out) {
    if (!engine.has_view(view)) {
        std::cerr << "unknown view: " << view << "\n";
        return kExitUnknownView;
    }
    try {
        if (engine.view_config(view).policy.cache_type != viewfed::CacheType::None) {
            auto outcome = engine.refresh_view(view, viewfed::RefreshCause::Manual);
            if (outcome.kind != viewfed::RefreshOutcome::Kind::Refreshed) {
                std::cerr << "source failure: " << outcome.detail << "\n";
                return kExitSource;
            }
        }
        out = engine.read_view(view).first;
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "source failure: " << e.what() << "\n";
        return kExitSource;
    }
}

int cmd_get(const std::string& config_path, const std::string& view, const std::string& format) {
    viewfed::ServiceConfig cfg = load_or_exit(config_path);
    viewfed::SystemClock clock;
    viewfed::CacheEngine engine = one_shot_engine(cfg, clock);
    viewfed::Document doc;
    if (int rc = build_view(engine, view, doc)) return rc;
    std::cout << viewfed::doc_serialize(doc, viewfed::parse_format(format));
    return 0;
}

int cmd_render(const std::string& config_path, const std::string& view,
               const std::string& transform_path, const std::string& format) {
    viewfed::ServiceConfig cfg = load_or_exit(config_path);
    viewfed::SystemClock clock;
    viewfed::CacheEngine engine = one_shot_engine(cfg, clock);
    viewfed::Document doc;
    if (int rc = build_view(engine, view, doc)) return rc;
    try {
        viewfed::TransformTemplate tpl = viewfed::transform_parse(
            viewfed::doc_parse(slurp(transform_path), viewfed::DocFormat::Xml));
        viewfed::Document result = viewfed::transform_apply(doc, tpl);
        std::cout << viewfed::doc_serialize(result, viewfed::parse_format(format));
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "transform error: " << e.what() << "\n";
        return kExitTransform;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"data view composition and caching service"};
    app.require_subcommand(1);

    std::string config_path, view, format = "xml", transform_path;

    auto* serve = app.add_subcommand("serve", "run the service");
    serve->add_option("--config", config_path, "configuration file")->required();

    auto* check = app.add_subcommand("check", "validate a configuration");
    check->add_option("--config", config_path, "configuration file")->required();

    auto* get = app.add_subcommand("get", "build one view and print it");
    get->add_option("--config", config_path, "configuration file")->required();
    get->add_option("VIEW", view, "view name")->required();
    get->add_option("--format", format, "xml or json");

    auto* render = app.add_subcommand("render", "build a view and apply a transform");
    render->add_option("--config", config_path, "configuration file")->required();
    render->add_option("VIEW", view, "view name")->required();
    render->add_option("--transform", transform_path, "transform template file")->required();
    render->add_option("--format", format, "xml or json");

    CLI11_PARSE(app, argc, argv);

    if (serve->parsed()) return cmd_serve(config_path);
    if (check->parsed()) return cmd_check(config_path);
    if (get->parsed()) return cmd_get(config_path, view, format);
    if (render->parsed()) return cmd_render(config_path, view, transform_path, format);
    return 0;
}
