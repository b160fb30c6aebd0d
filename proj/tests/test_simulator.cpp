#include <doctest.h>
#include <httplib.h>

#include <chrono>

#include "viewfed/simulator.hpp"

using namespace viewfed;

namespace {

httplib::Client client_for(const SourceSimulator& s) {
    httplib::Client c("127.0.0.1", s.port());
    c.set_read_timeout(5, 0);
    return c;
}

sim::Scenario scenario(std::vector<sim::Step> steps, sim::Repeat repeat) {
    return sim::Scenario{std::move(steps), repeat};
}

}  // namespace

TEST_CASE("steps are consumed in order") {
    std::map<std::string, sim::Scenario> sc;
    sc["/s"] = scenario({sim::Respond{"<a/>"}, sim::Fail{503}, sim::Respond{"<b/>"}},
                        sim::Repeat::LoopLast);
    SourceSimulator sim(std::move(sc));
    sim.start();
    auto c = client_for(sim);

    auto r1 = c.Get("/s");
    REQUIRE(r1);
    CHECK(r1->status == 200);
    CHECK(r1->body == "<a/>");
    auto r2 = c.Get("/s");
    REQUIRE(r2);
    CHECK(r2->status == 503);
    auto r3 = c.Get("/s");
    REQUIRE(r3);
    CHECK(r3->body == "<b/>");
    // loop_last repeats the final step
    auto r4 = c.Get("/s");
    REQUIRE(r4);
    CHECK(r4->body == "<b/>");
    CHECK(sim.count("/s") == 4);
}

TEST_CASE("repeat modes once and cycle") {
    std::map<std::string, sim::Scenario> sc;
    sc["/once"] = scenario({sim::Respond{"<a/>"}}, sim::Repeat::Once);
    sc["/cycle"] = scenario({sim::Respond{"<a/>"}, sim::Respond{"<b/>"}}, sim::Repeat::Cycle);
    SourceSimulator sim(std::move(sc));
    sim.start();
    auto c = client_for(sim);

    CHECK(c.Get("/once")->status == 200);
    CHECK(c.Get("/once")->status == 500);  // exhausted

    CHECK(c.Get("/cycle")->body == "<a/>");
    CHECK(c.Get("/cycle")->body == "<b/>");
    CHECK(c.Get("/cycle")->body == "<a/>");
}

TEST_CASE("unknown routes 404 and do not count") {
    std::map<std::string, sim::Scenario> sc;
    sc["/s"] = scenario({sim::Respond{"<a/>"}}, sim::Repeat::LoopLast);
    SourceSimulator sim(std::move(sc));
    sim.start();
    auto c = client_for(sim);
    CHECK(c.Get("/other")->status == 404);
    CHECK_THROWS_AS(sim.count("/other"), UnknownRouteError);
}

TEST_CASE("control routes expose counters and reset") {
    std::map<std::string, sim::Scenario> sc;
    sc["/s"] = scenario({sim::Respond{"<a/>"}, sim::Fail{500}}, sim::Repeat::LoopLast);
    SourceSimulator sim(std::move(sc));
    sim.start();
    auto c = client_for(sim);

    c.Get("/s");
    c.Get("/s");
    auto count = c.Get("/_count/s");
    REQUIRE(count);
    CHECK(count->body == "2");

    auto reset = c.Post("/_reset");
    REQUIRE(reset);
    CHECK(reset->status == 204);
    CHECK(sim.count("/s") == 0);
    // cursor rewound: first step again
    CHECK(c.Get("/s")->body == "<a/>");
}

TEST_CASE("respond delay is observed") {
    std::map<std::string, sim::Scenario> sc;
    sc["/slow"] = scenario({sim::Respond{"<a/>", "application/xml", 150}}, sim::Repeat::LoopLast);
    SourceSimulator sim(std::move(sc));
    sim.start();
    auto c = client_for(sim);
    auto t0 = std::chrono::steady_clock::now();
    auto r = c.Get("/slow");
    auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
            .count();
    REQUIRE(r);
    CHECK(elapsed >= 140);
}

TEST_CASE("drop terminates the connection without a full response") {
    std::map<std::string, sim::Scenario> sc;
    sc["/d"] = scenario({sim::Drop{}, sim::Respond{"<a/>"}}, sim::Repeat::LoopLast);
    SourceSimulator sim(std::move(sc));
    sim.start();
    auto c = client_for(sim);
    auto r = c.Get("/d");
    CHECK_FALSE(r);  // client sees an aborted transfer
    CHECK(c.Get("/d")->body == "<a/>");
    CHECK(sim.count("/d") == 2);
}

TEST_CASE("scenario file parsing") {
    auto parsed = sim::parse_scenarios(R"({
        "/status": {
            "repeat": "cycle",
            "steps": [
                {"type": "respond", "body": "<s/>", "format": "json", "delay_ms": 5},
                {"type": "fail", "status": 502},
                {"type": "drop"},
                {"type": "hang", "ms": 100}
            ]
        }
    })");
    REQUIRE(parsed.count("/status") == 1);
    const auto& s = parsed["/status"];
    CHECK(s.repeat == sim::Repeat::Cycle);
    REQUIRE(s.steps.size() == 4);
    CHECK(std::get<sim::Respond>(s.steps[0]).delay_ms == 5);
    CHECK(std::get<sim::Respond>(s.steps[0]).content_type == "application/json");
    CHECK(std::get<sim::Fail>(s.steps[1]).http_status == 502);
    CHECK(std::holds_alternative<sim::Drop>(s.steps[2]));
    CHECK(std::get<sim::Hang>(s.steps[3]).ms == 100);

    CHECK_THROWS(sim::parse_scenarios("not json"));
    CHECK_THROWS(sim::parse_scenarios(R"({"/r": {"steps": [{"type": "nope"}]}})"));
}

TEST_CASE("starting on a busy port raises PortInUseError") {
    std::map<std::string, sim::Scenario> sc;
    sc["/s"] = scenario({sim::Respond{"<a/>"}}, sim::Repeat::LoopLast);
    SourceSimulator first(std::move(sc));
    int port = first.start();
    SourceSimulator second({});
    CHECK_THROWS_AS(second.start(port), PortInUseError);
}
