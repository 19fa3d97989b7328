#include "chaintopo/log.hpp"

#include <iostream>
#include <mutex>
#include <set>

namespace chaintopo::log {
namespace {

std::mutex& mutex() {
  static std::mutex m;
  return m;
}

Sink& current() {
  static Sink sink;
  return sink;
}

// Repeated messages (one per retrained day, say) are printed once.
void default_sink(std::string_view message) {
  static std::set<std::string, std::less<>> seen;
  if (seen.size() > 1000 || !seen.emplace(message).second) return;
  std::cerr << "warning: " << message << '\n';
}

}  // namespace

void warn(std::string_view message) {
  std::lock_guard lock(mutex());
  if (current()) {
    current()(message);
  } else {
    default_sink(message);
  }
}

Sink set_warning_sink(Sink sink) {
  std::lock_guard lock(mutex());
  Sink previous = std::move(current());
  current() = std::move(sink);
  return previous;
}

}  // namespace chaintopo::log
