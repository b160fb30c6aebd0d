#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <string>
#include <thread>

namespace viewfed {

// Milliseconds since the Unix epoch. All freshness logic (ttl, intervals,
// ages) goes through a Clock so tests can drive time explicitly.
using TimeMs = std::int64_t;

class Clock {
public:
    virtual ~Clock() = default;
    virtual TimeMs now() const = 0;
    virtual void sleep_for(TimeMs ms) = 0;
};

class SystemClock final : public Clock {
public:
    TimeMs now() const override {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::system_clock::now().time_since_epoch())
            .count();
    }
    void sleep_for(TimeMs ms) override {
        std::this_thread::sleep_for(std::chrono::milliseconds(ms));
    }
};

// Test clock: time moves only when advanced; sleep_for advances it.
class ManualClock final : public Clock {
public:
    explicit ManualClock(TimeMs start = 0) : now_(start) {}
    TimeMs now() const override { return now_.load(); }
    void sleep_for(TimeMs ms) override { now_ += ms; }
    void advance(TimeMs ms) { now_ += ms; }
    void set(TimeMs t) { now_.store(t); }

private:
    std::atomic<TimeMs> now_;
};

std::string format_rfc3339(TimeMs t);

}  // namespace viewfed
