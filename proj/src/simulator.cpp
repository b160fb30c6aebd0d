#include "viewfed/simulator.hpp"

#include <chrono>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace viewfed {

using nlohmann::json;

namespace sim {

std::map<std::string, Scenario> parse_scenarios(const std::string& json_text) {
    json j = json::parse(json_text);
    std::map<std::string, Scenario> out;
    for (const auto& [route, sj] : j.items()) {
        Scenario scenario;
        std::string repeat = sj.value("repeat", "loop_last");
        if (repeat == "once") scenario.repeat = Repeat::Once;
        else if (repeat == "loop_last") scenario.repeat = Repeat::LoopLast;
        else if (repeat == "cycle") scenario.repeat = Repeat::Cycle;
        else throw std::runtime_error("unknown repeat mode: " + repeat);

        for (const auto& step : sj.at("steps")) {
            std::string type = step.at("type").get<std::string>();
            if (type == "respond") {
                Respond r;
                r.body = step.value("body", "");
                std::string format = step.value("format", "xml");
                r.content_type = format == "json" ? "application/json" : "application/xml";
                r.delay_ms = step.value("delay_ms", std::int64_t{0});
                scenario.steps.emplace_back(std::move(r));
            } else if (type == "fail") {
                scenario.steps.emplace_back(Fail{step.value("status", 500)});
            } else if (type == "drop") {
                scenario.steps.emplace_back(Drop{});
            } else if (type == "hang") {
                scenario.steps.emplace_back(Hang{step.value("ms", std::int64_t{0})});
            } else {
                throw std::runtime_error("unknown step type: " + type);
            }
        }
        if (scenario.steps.empty())
            throw std::runtime_error("scenario for " + route + " has no steps");
        out[route] = std::move(scenario);
    }
    return out;
}

}  // namespace sim

SourceSimulator::SourceSimulator(std::map<std::string, sim::Scenario> scenarios)
    : server_(std::make_unique<httplib::Server>()) {
    // no SO_REUSEPORT: a second simulator on the same port must fail to bind
    server_->set_socket_options([](socket_t sock) {
        int yes = 1;
        ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes),
                     sizeof(yes));
    });
    for (auto& [name, scenario] : scenarios) {
        RouteState state;
        state.scenario = std::move(scenario);
        routes_.emplace(name, std::move(state));
    }
    route();
}

SourceSimulator::~SourceSimulator() { stop(); }

const sim::Step* SourceSimulator::next_step(RouteState& state) {
    const auto& steps = state.scenario.steps;
    std::size_t idx = state.cursor++;
    switch (state.scenario.repeat) {
        case sim::Repeat::Once:
            if (idx >= steps.size()) return nullptr;
            return &steps[idx];
        case sim::Repeat::LoopLast:
            return &steps[std::min(idx, steps.size() - 1)];
        case sim::Repeat::Cycle:
            return &steps[idx % steps.size()];
    }
    return nullptr;
}

void SourceSimulator::route() {
    auto& svr = *server_;

    svr.Get("/_count/(.+)", [this](const httplib::Request& req, httplib::Response& res) {
        std::string route = "/" + std::string(req.matches[1]);
        std::lock_guard lock(mutex_);
        auto it = routes_.find(route);
        if (it == routes_.end()) {
            res.status = 404;
            res.set_content("unknown route: " + route, "text/plain");
            return;
        }
        res.set_content(std::to_string(it->second.count), "text/plain");
    });

    svr.Post("/_reset", [this](const httplib::Request&, httplib::Response& res) {
        reset();
        res.status = 204;
    });

    svr.Get("/(.*)", [this](const httplib::Request& req, httplib::Response& res) {
        sim::Step step;
        {
            std::lock_guard lock(mutex_);
            auto it = routes_.find(req.path);
            if (it == routes_.end()) {
                res.status = 404;
                res.set_content("no scenario for route " + req.path, "text/plain");
                return;
            }
            it->second.count += 1;
            const sim::Step* next = next_step(it->second);
            if (!next) {
                res.status = 500;
                res.set_content("scenario exhausted", "text/plain");
                return;
            }
            step = *next;
        }

        if (const auto* respond = std::get_if<sim::Respond>(&step)) {
            if (respond->delay_ms > 0)
                std::this_thread::sleep_for(std::chrono::milliseconds(respond->delay_ms));
            res.set_content(respond->body, respond->content_type);
        } else if (const auto* fail = std::get_if<sim::Fail>(&step)) {
            res.status = fail->http_status;
            res.set_content("scripted failure", "text/plain");
        } else if (std::holds_alternative<sim::Drop>(step)) {
            // advertise a body that never arrives; the connection dies mid-response
            res.set_content_provider(
                1024, "application/octet-stream",
                [](std::size_t, std::size_t, httplib::DataSink&) { return false; });
        } else if (const auto* hang = std::get_if<sim::Hang>(&step)) {
            std::this_thread::sleep_for(std::chrono::milliseconds(hang->ms));
            res.set_content("", "text/plain");
        }
    });
}

int SourceSimulator::start(int port) {
    if (port == 0) {
        port_ = server_->bind_to_any_port("127.0.0.1");
        if (port_ < 0) throw PortInUseError("cannot bind an ephemeral port");
    } else {
        if (!server_->bind_to_port("127.0.0.1", port))
            throw PortInUseError("port " + std::to_string(port) + " is in use");
        port_ = port;
    }
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port_;
}

void SourceSimulator::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

std::string SourceSimulator::url(const std::string& route) const {
    return "http://127.0.0.1:" + std::to_string(port_) + route;
}

std::uint64_t SourceSimulator::count(const std::string& route) const {
    std::lock_guard lock(mutex_);
    auto it = routes_.find(route);
    if (it == routes_.end()) throw UnknownRouteError("unknown route: " + route);
    return it->second.count;
}

void SourceSimulator::reset() {
    std::lock_guard lock(mutex_);
    for (auto& [_, state] : routes_) {
        state.cursor = 0;
        state.count = 0;
    }
}

}  // namespace viewfed
