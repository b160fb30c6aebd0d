#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "viewfed/simulator.hpp"

namespace {

std::atomic<bool> g_stop{false};
void on_signal(int) { g_stop.store(true); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scenario-scripted mock HTTP source"};
    std::string scenario_path;
    int port = 0;
    app.add_option("--scenarios", scenario_path, "scenario JSON file")->required();
    app.add_option("--port", port, "port to bind (0 picks a free port)");
    CLI11_PARSE(app, argc, argv);

    std::ifstream in(scenario_path, std::ios::binary);
    if (!in) {
        std::cerr << "cannot read " << scenario_path << "\n";
        return 2;
    }
    std::ostringstream buf;
    buf << in.rdbuf();

    try {
        viewfed::SourceSimulator simulator(viewfed::sim::parse_scenarios(buf.str()));
        int bound = simulator.start(port);
        std::cout << bound << std::endl;  // callers read the bound port from stdout

        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        while (!g_stop.load()) std::this_thread::sleep_for(std::chrono::milliseconds(50));
        simulator.stop();
        return 0;
    } catch (const viewfed::PortInUseError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}
