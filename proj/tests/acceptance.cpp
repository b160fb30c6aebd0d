// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits non-zero if any criterion fails.

#include <httplib.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "support.hpp"
#include "viewfed/api.hpp"
#include "viewfed/cache.hpp"
#include "viewfed/config.hpp"
#include "viewfed/simulator.hpp"
#include "viewfed/transform.hpp"

using namespace viewfed;
using nlohmann::json;
using testsupport::TempDir;

namespace {

int g_failures = 0;

void criterion(int num, const std::string& title, const std::function<void()>& body) {
    std::string detail;
    bool ok = true;
    try {
        body();
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    std::printf("%s  %d. %s%s%s\n", ok ? "PASS" : "FAIL", num, title.c_str(),
                detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

void expect(bool cond, const std::string& msg) {
    if (!cond) throw std::runtime_error(msg);
}

ViewConfig file_view(const std::string& name, const std::string& path,
                     std::vector<TriggerRule> triggers = {}) {
    ViewConfig v;
    v.name = name;
    v.adapter = AdapterSpec{FileAdapter{path, FileFormat::Xml, true}};
    v.triggers = std::move(triggers);
    return v;
}

std::string sites_feed(const std::string& root, int count, const std::string& extra_attr) {
    std::string out = "<" + root + ">";
    for (int i = 0; i < count; ++i) {
        out += std::string("<rec site=\"site") + (i < 10 ? "0" : "") + std::to_string(i) +
               "\" " +
               extra_attr + "=\"v" + std::to_string(i) + "\"/>";
    }
    return out + "</" + root + ">";
}

// -------------------------------------------------------------------------

void criterion1_reference_config() {
    std::filesystem::remove_all("configs/cache");

    std::map<std::string, sim::Scenario> sc;
    sc["/status"] = {{sim::Respond{"<status ok=\"1\"/>"}}, sim::Repeat::LoopLast};
    SourceSimulator simulator(std::move(sc));
    simulator.start(9099);

    ServiceConfig cfg = config_load(testsupport::read_file("configs/reference.json"));
    SystemClock clock;

    std::uint64_t restored_generation = 0;
    {
        CacheEngine engine(cfg.expanded_views(), cfg.schemas, clock);

        // (a) the flat-file view serves from memory
        for (int i = 0; i < 100; ++i) engine.read_view("sites");
        expect(engine.adapter_calls("sites") == 1,
               "sites view regenerated more than once across 100 reads");

        // (b) the table view caches on disk
        restored_generation = engine.read_view("resources").second.generation;
        expect(std::filesystem::exists("configs/cache/resources.xml"),
               "disk cache file missing");

        // (c) the web-service view is regenerated on each access
        for (int i = 0; i < 50; ++i) engine.read_view("status");
        expect(simulator.count("/status") == 50,
               "status view did not hit the source once per read");

        // (d) refreshing the table refreshes the derived view exactly once
        engine.read_view("resource_summary");  // warm
        std::uint64_t before = engine.adapter_calls("resource_summary");
        engine.refresh_view("resources", RefreshCause::Manual);
        expect(engine.adapter_calls("resource_summary") == before + 1,
               "derived view not refreshed exactly once");
    }

    // (b) continued: the disk cache survives a process restart
    CacheEngine restarted(cfg.expanded_views(), cfg.schemas, clock);
    auto meta = restarted.read_view("resources").second;
    expect(restarted.adapter_calls("resources") == 0, "restart re-read the source");
    expect(meta.generation >= restored_generation, "restart lost the cached generation");

    std::filesystem::remove_all("configs/cache");
}

void criterion2_synchronized_exposure() {
    TempDir dir;
    std::string path = dir.file("t.xml", "<t><row name=\"a\"/></t>");
    ViewConfig t = file_view("t", path);
    t.policy.consistency_group = "g";
    ViewConfig d;
    d.name = "d";
    d.adapter = AdapterSpec{DerivedAdapter{
        {"t"}, transform_parse(doc_parse(
                   R"(<names><n vf:for-each="/t/row" vf:value-of="@name"/></names>)",
                   DocFormat::Xml))}};
    d.depends_on = {"t"};
    d.policy.consistency_group = "g";

    SystemClock clock;
    CacheEngine engine({t, d}, {}, clock);
    engine.refresh_view("t", RefreshCause::Manual);

    ApiServer server(engine);
    int port = server.start("127.0.0.1", 0);

    std::atomic<bool> refreshing{true};
    std::thread refresher([&] {
        for (int i = 0; i < 100; ++i) engine.refresh_view("t", RefreshCause::Manual);
        refreshing.store(false);
    });

    std::atomic<int> mixed{0}, total{0};
    auto reader = [&] {
        httplib::Client c("127.0.0.1", port);
        c.set_read_timeout(10, 0);
        for (int i = 0; i < 125; ++i) {
            auto res = c.Get("/snapshot?views=t,d");
            if (!res || res->status != 200) {
                ++mixed;
                continue;
            }
            json body = json::parse(res->body);
            if (body["t"]["epoch"] != body["d"]["epoch"]) ++mixed;
            ++total;
        }
    };
    std::vector<std::thread> readers;
    for (int i = 0; i < 8; ++i) readers.emplace_back(reader);
    for (auto& r : readers) r.join();
    refresher.join();

    expect(total.load() == 1000, "expected 1000 successful snapshots, got " +
                                     std::to_string(total.load()));
    expect(mixed.load() == 0,
           std::to_string(mixed.load()) + " snapshots observed mixed epochs");
}

void criterion3_ttl_safety() {
    std::map<std::string, sim::Scenario> sc;
    sc["/s"] = {{sim::Respond{"<s/>"}, sim::Fail{503}}, sim::Repeat::LoopLast};
    SourceSimulator simulator(std::move(sc));
    simulator.start();

    ViewConfig v;
    v.name = "s";
    v.adapter = AdapterSpec{HttpAdapter{simulator.url("/s"), {}, DocFormat::Xml}};
    v.policy.ttl_ms = 100;
    v.triggers = {{TriggerKind::OnRead}};
    v.fallbacks = {{FallbackMatch::Any, 100, 599, FallbackAction::Ignore}};

    ManualClock clock(0);
    CacheEngine engine({v}, {}, clock);
    ApiServer server(engine);
    int port = server.start("127.0.0.1", 0);
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(10, 0);

    engine.refresh_view("s", RefreshCause::Manual);  // the single success

    int overdue_served = 0;
    for (TimeMs t : {0, 20, 50, 80, 100, 101, 120, 250, 1000}) {
        clock.set(t);
        auto res = c.Get("/views/s");
        if (t <= 100) {
            expect(res && res->status == 200,
                   "read at age " + std::to_string(t) + " did not serve content");
            if (std::stoll(res->get_header_value("X-Age-Ms")) > 100) ++overdue_served;
        } else {
            expect(res && res->status == 503,
                   "read at age " + std::to_string(t) + " did not fail outdated");
            expect(json::parse(res->body)["code"] == "OUTDATED_CACHE",
                   "wrong error code past ttl");
        }
    }
    expect(overdue_served == 0, "a read reported X-Age-Ms > 100");
}

void criterion4_fallback_matrix() {
    StructSchema schema;
    schema.root = "a";
    schema.rules["a"] = ElementRule{};

    struct Row {
        const char* name;
        FallbackMatch match;
        sim::Step failure;
        SourceErrorClass expected_class;
    };
    std::vector<Row> rows = {
        {"unavailable", FallbackMatch::SourceUnavailable, sim::Drop{},
         SourceErrorClass::Unavailable},
        {"timeout", FallbackMatch::SourceTimeout, sim::Hang{400}, SourceErrorClass::Timeout},
        {"http_status", FallbackMatch::HttpStatus, sim::Fail{503},
         SourceErrorClass::HttpStatus},
        {"malformed", FallbackMatch::SourceMalformed, sim::Respond{"<a><b></a>"},
         SourceErrorClass::Malformed},
        {"validation", FallbackMatch::ValidationError, sim::Respond{"<a><bad/></a>"},
         SourceErrorClass::Validation},
        {"any", FallbackMatch::Any, sim::Fail{418}, SourceErrorClass::HttpStatus},
    };

    for (const Row& row : rows) {
        for (FallbackAction action :
             {FallbackAction::Ignore, FallbackAction::Error, FallbackAction::Retry}) {
            std::map<std::string, sim::Scenario> sc;
            sc["/s"] = {{sim::Respond{"<a/>"}, row.failure}, sim::Repeat::LoopLast};
            SourceSimulator simulator(std::move(sc));
            simulator.start();

            ViewConfig v;
            v.name = "s";
            v.adapter = AdapterSpec{HttpAdapter{simulator.url("/s"), {}, DocFormat::Xml}};
            v.policy.update_timeout_ms = 100;
            v.policy.validation = ValidationMode::Schema;
            v.policy.schema_ref = "schema";
            FallbackRule rule;
            rule.match = row.match;
            rule.action = action;
            rule.status_lo = 100;
            rule.status_hi = 599;
            if (action == FallbackAction::Retry) {
                rule.retries = 2;
                rule.backoff_ms = 0;
                rule.final_disposition = FallbackAction::Error;
            }
            v.fallbacks = {rule};

            ManualClock clock;
            CacheEngine engine({v}, {{"schema", schema}}, clock);
            expect(engine.refresh_view("s", RefreshCause::Manual).kind ==
                       RefreshOutcome::Kind::Refreshed,
                   std::string(row.name) + ": warm-up refresh failed");

            std::uint64_t before = simulator.count("/s");
            RefreshOutcome out = engine.refresh_view("s", RefreshCause::Manual);
            std::uint64_t attempts = simulator.count("/s") - before;
            std::string cell = std::string(row.name) + "/" +
                               (action == FallbackAction::Ignore  ? "ignore"
                                : action == FallbackAction::Error ? "error"
                                                                  : "retry");

            expect(out.error == row.expected_class, cell + ": wrong error class");
            switch (action) {
                case FallbackAction::Ignore:
                    expect(out.kind == RefreshOutcome::Kind::ServedStaleKept,
                           cell + ": expected served_stale_kept");
                    expect(attempts == 1, cell + ": expected a single attempt");
                    engine.read_view("s");  // stale content is still served
                    break;
                case FallbackAction::Error:
                    expect(out.kind == RefreshOutcome::Kind::Failed,
                           cell + ": expected failed");
                    expect(attempts == 1, cell + ": expected a single attempt");
                    break;
                case FallbackAction::Retry:
                    expect(out.kind == RefreshOutcome::Kind::Failed,
                           cell + ": expected failed after retries");
                    expect(attempts == 3,
                           cell + ": expected retries+1 = 3 attempts, saw " +
                               std::to_string(attempts));
                    break;
            }
        }
    }
}

void criterion5_outage_tolerant_join() {
    TempDir dir;
    std::string ggus = dir.file("ggus.xml", sites_feed("ggus", 20, "tickets"));
    std::string goc = dir.file("goc.xml", sites_feed("goc", 20, "contact"));
    std::string sam = dir.file("sam.xml", sites_feed("sam", 20, "availability"));

    std::vector<ViewConfig> views;
    for (auto [name, path] : std::initializer_list<std::pair<const char*, std::string>>{
             {"ggus", ggus}, {"goc", goc}, {"sam", sam}}) {
        ViewConfig v = file_view(name, path);
        v.fallbacks = {{FallbackMatch::Any, 100, 599, FallbackAction::Ignore}};
        views.push_back(std::move(v));
    }
    JoinSpec spec;
    spec.name = "sitesview";
    for (const char* src : {"ggus", "goc", "sam"})
        spec.sources.push_back({src, "/" + std::string(src) + "/rec", "@site"});
    views.push_back(site_view_config(spec, CachePolicy{}));

    ManualClock clock(0);
    CacheEngine engine(views, {}, clock);
    engine.refresh_view("sitesview", RefreshCause::Manual);

    // one primary source goes down; its last refresh attempt fails and is
    // ignored, so the join serves its cached records marked stale
    std::filesystem::remove(sam);
    clock.advance(42'000);
    engine.refresh_view("sam", RefreshCause::Manual);
    engine.refresh_view("sitesview", RefreshCause::Manual);

    Document doc = engine.read_view("sitesview").first;
    expect(doc.root.children().size() == 20,
           "expected 20 site entries, got " + std::to_string(doc.root.children().size()));
    for (const Node& site : doc.root.children()) {
        expect(site.children().size() == 3, "site entry missing a source");
        for (const Node& source : site.children()) {
            const std::string& name = *source.attribute("name");
            if (name == "sam") {
                expect(*source.attribute("status") == "stale", "sam not marked stale");
                expect(*source.attribute("age") == "42", "wrong stale age");
            } else {
                expect(*source.attribute("status") == "ok", name + " not ok");
            }
            expect(source.children().size() == 1, name + " record missing");
        }
    }
}

std::string random_path(std::mt19937& rng) {
    static const std::vector<std::string> selectors{"sites", "site",  "row",   "item",
                                                    "entry", "value", "group", "record", "*"};
    static const std::vector<std::string> attrs{"name", "status", "id", "kind"};
    std::uniform_int_distribution<int> steps_dist(1, 3);
    std::uniform_int_distribution<int> sel(0, static_cast<int>(selectors.size()) - 1);
    std::uniform_int_distribution<int> attr(0, static_cast<int>(attrs.size()) - 1);
    std::uniform_int_distribution<int> coin(0, 99);
    std::string path;
    int steps = steps_dist(rng);
    for (int i = 0; i < steps; ++i) {
        path += "/" + selectors[sel(rng)];
        int c = coin(rng);
        if (c < 20) path += "[@" + attrs[attr(rng)] + "='A']";
        else if (c < 35) path += "[" + std::to_string(1 + c % 3) + "]";
    }
    if (coin(rng) < 30) path += "/@" + attrs[attr(rng)];
    return path;
}

void criterion6_query_oracles() {
    std::mt19937 rng(20260824);
    for (int i = 0; i < 500; ++i) {
        Document doc = testsupport::random_document(rng);
        std::string expr = random_path(rng);
        PathExpr path = vpath_parse(expr);
        auto got = vpath_eval(doc, path);
        auto expected = testsupport::oracle_eval(doc, nullptr, path);
        expect(got.size() == expected.size(), "vpath oracle mismatch on " + expr);
        for (std::size_t k = 0; k < got.size(); ++k) {
            if (expected[k].is_attr)
                expect(got[k].attr_value && *got[k].attr_value == expected[k].attr_value,
                       "vpath oracle attr mismatch on " + expr);
            else
                expect(got[k].node == expected[k].node, "vpath oracle node mismatch on " + expr);
        }
    }
    for (int i = 0; i < 100; ++i) {
        Document doc = testsupport::random_document(rng);
        Document tpl;
        tpl.root = Node("out");
        Node inner("e");
        inner.set_attribute("vf:for-each", random_path(rng));
        Node leaf("v");
        leaf.set_attribute("vf:value-of", "@name");
        inner.add_child(std::move(leaf));
        tpl.root.add_child(std::move(inner));
        Document got = transform_apply(doc, transform_parse(tpl));
        auto expected = testsupport::naive_transform(doc, tpl.root, doc.root);
        expect(expected.size() == 1 && node_equal(got.root, expected[0]),
               "transform oracle mismatch");
    }
}

void criterion7_config_robustness() {
    std::string base = testsupport::read_file("configs/reference.json");
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> pos(0, static_cast<int>(base.size()) - 1);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<int> edits(1, 6);
    for (int i = 0; i < 10'000; ++i) {
        std::string text = base;
        int n = edits(rng);
        for (int k = 0; k < n; ++k) text[pos(rng)] = static_cast<char>(byte(rng));
        try {
            config_load(text);
        } catch (const ConfigSyntaxError&) {
        } catch (const ConfigSemanticError&) {
        }  // anything else escapes and fails the criterion
    }

    bool cycle_caught = false;
    try {
        config_load(R"({"views": [
            {"name": "a", "adapter": {"kind": "derived", "base_views": ["b"],
                                      "transform": "<a/>"}},
            {"name": "b", "adapter": {"kind": "derived", "base_views": ["a"],
                                      "transform": "<b/>"}}]})");
    } catch (const ConfigSemanticError& e) {
        for (const auto& issue : e.issues)
            if (issue.find("dependency cycle") != std::string::npos) cycle_caught = true;
    }
    expect(cycle_caught, "dependency cycle not reported");

    bool dangling_caught = false;
    try {
        config_load(R"({"views": [
            {"name": "a", "adapter": {"kind": "file", "path": "x"},
             "depends_on": ["ghost"]}]})");
    } catch (const ConfigSemanticError& e) {
        for (const auto& issue : e.issues)
            if (issue.find("unresolved dependency") != std::string::npos)
                dangling_caught = true;
    }
    expect(dangling_caught, "dangling reference not reported");
}

void criterion8_round_trip() {
    std::mt19937 rng(88);
    for (int i = 0; i < 1000; ++i) {
        Document d = testsupport::random_document(rng);
        Document xml_rt = doc_parse(doc_serialize(d, DocFormat::Xml), DocFormat::Xml);
        Document json_rt = doc_parse(doc_serialize(d, DocFormat::Json), DocFormat::Json);
        expect(doc_equal(xml_rt, d), "xml round-trip changed the document");
        expect(doc_equal(json_rt, d), "json round-trip changed the document");
        expect(doc_equal(xml_rt, json_rt), "formats disagree after round-trip");
    }
}

void criterion9_monotonic_reads() {
    TempDir dir;
    std::string path = dir.file("a.xml", "<a/>");
    SystemClock clock;
    CacheEngine engine({file_view("a", path)}, {}, clock);
    engine.refresh_view("a", RefreshCause::Manual);

    std::atomic<bool> done{false};
    std::atomic<bool> decreased{false};
    std::thread reader([&] {
        std::uint64_t last = 0;
        while (!done.load()) {
            std::uint64_t gen = engine.read_view("a").second.generation;
            if (gen < last) decreased.store(true);
            last = gen;
        }
    });
    for (int i = 0; i < 200; ++i) engine.refresh_view("a", RefreshCause::Manual);
    done.store(true);
    reader.join();

    expect(!decreased.load(), "a read observed a generation decrease");
    expect(engine.read_view("a").second.generation == 201, "refresh count mismatch");
}

}  // namespace

int main() {
    criterion(1, "reference configuration: memory, disk, uncached and derived views",
              criterion1_reference_config);
    criterion(2, "consistency group exposes simultaneously (1000 snapshots, 100 refreshes)",
              criterion2_synchronized_exposure);
    criterion(3, "ttl never serves outdated content under a controlled clock",
              criterion3_ttl_safety);
    criterion(4, "fallback matrix: 6 error classes x 3 actions, exact retry counts",
              criterion4_fallback_matrix);
    criterion(5, "3-source 20-site join tolerates a source outage with stale marking",
              criterion5_outage_tolerant_join);
    criterion(6, "query engine matches brute-force oracles (500 path, 100 transform pairs)",
              criterion6_query_oracles);
    criterion(7, "config loader survives 10000 fuzzed inputs; cycles and danglers reported",
              criterion7_config_robustness);
    criterion(8, "1000 random documents round-trip in both formats", criterion8_round_trip);
    criterion(9, "generations are monotonic under 200 concurrent refreshes",
              criterion9_monotonic_reads);

    if (g_failures) {
        std::cout << g_failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all 9 criteria passed" << std::endl;
    return 0;
}
