#pragma once

#include <memory>
#include <string>
#include <thread>

#include "viewfed/cache.hpp"

namespace httplib {
class Server;
}

namespace viewfed {

// REST surface over a CacheEngine. Holds no mutable state of its own; all
// shared-state discipline is the engine's.
//
// Routes: GET /views, GET /views/{name}, POST /views/{name}/refresh,
// POST /views/{name}/transform, PUT /views/{name}, POST /notify/{event},
// GET /snapshot?views=a,b,c
class ApiServer {
public:
    explicit ApiServer(CacheEngine& engine);
    ~ApiServer();

    // Binds and serves on a background thread. port 0 picks a free port;
    // returns the bound port. Throws IoError when binding fails.
    int start(const std::string& host, int port);
    void stop();
    int port() const { return port_; }

private:
    void route();

    CacheEngine& engine_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
};

}  // namespace viewfed
