#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace chaintopo::log {

using Sink = std::function<void(std::string_view)>;

// Thread-safe. The default sink writes "warning: <msg>" to stderr.
void warn(std::string_view message);

// Returns the previous sink. Pass an empty function to restore the default.
Sink set_warning_sink(Sink sink);

// Installs a sink for the lifetime of the guard (tests capture warnings with it).
class ScopedSink {
 public:
  explicit ScopedSink(Sink sink) : previous_(set_warning_sink(std::move(sink))) {}
  ~ScopedSink() { set_warning_sink(std::move(previous_)); }
  ScopedSink(const ScopedSink&) = delete;
  ScopedSink& operator=(const ScopedSink&) = delete;

 private:
  Sink previous_;
};

}  // namespace chaintopo::log
