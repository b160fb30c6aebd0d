#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace httplib {
class Server;
}

namespace viewfed {

// Scripted mock HTTP source. Each route consumes its steps in order; control
// routes: GET /_count/{route}, POST /_reset.
namespace sim {

struct Respond {
    std::string body;
    std::string content_type = "application/xml";
    std::int64_t delay_ms = 0;
};

struct Fail {
    int http_status = 500;
};

// Connection closed before a complete response is delivered.
struct Drop {};

struct Hang {
    std::int64_t ms = 0;
};

using Step = std::variant<Respond, Fail, Drop, Hang>;

enum class Repeat { Once, LoopLast, Cycle };

struct Scenario {
    std::vector<Step> steps;
    Repeat repeat = Repeat::LoopLast;
};

// Parses the scenario file format: {"/route": {"repeat": "...", "steps":
// [{"type":"respond",...}, {"type":"fail",...}, ...]}}
std::map<std::string, Scenario> parse_scenarios(const std::string& json_text);

}  // namespace sim

struct PortInUseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownRouteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class SourceSimulator {
public:
    explicit SourceSimulator(std::map<std::string, sim::Scenario> scenarios);
    ~SourceSimulator();

    // port 0 picks a free port; returns the bound port.
    int start(int port = 0);
    void stop();

    int port() const { return port_; }
    std::string url(const std::string& route) const;

    std::uint64_t count(const std::string& route) const;
    void reset();

private:
    struct RouteState {
        sim::Scenario scenario;
        std::size_t cursor = 0;
        std::uint64_t count = 0;
    };

    void route();
    const sim::Step* next_step(RouteState& state);  // null when scenario exhausted

    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;

    mutable std::mutex mutex_;
    std::map<std::string, RouteState> routes_;
};

}  // namespace viewfed
