#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace cluspath::log {

using Sink = std::function<void(std::string_view)>;

// Warnings go to stderr unless a sink is installed. Returns the previous sink.
Sink set_sink(Sink sink);

void warn(std::string_view message);

// Installs a sink for the lifetime of the guard.
class ScopedSink {
public:
    explicit ScopedSink(Sink sink) : previous_(set_sink(std::move(sink))) {}
    ~ScopedSink() { set_sink(std::move(previous_)); }
    ScopedSink(const ScopedSink&) = delete;
    ScopedSink& operator=(const ScopedSink&) = delete;

private:
    Sink previous_;
};

}  // namespace cluspath::log
