#include "common/log.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace lift::log {
namespace {

Level from_env() {
  const char* env = std::getenv("LIFT_LOG");
  if (env == nullptr) return Level::Info;
  if (std::strcmp(env, "quiet") == 0) return Level::Quiet;
  if (std::strcmp(env, "debug") == 0) return Level::Debug;
  return Level::Info;
}

std::atomic<int>& current() {
  static std::atomic<int> value{static_cast<int>(from_env())};
  return value;
}

void emit(const char* tag, const std::string& message) {
  std::fprintf(stderr, "[lift %s] %s\n", tag, message.c_str());
}

}  // namespace

Level level() { return static_cast<Level>(current().load()); }
void set_level(Level value) { current().store(static_cast<int>(value)); }

void info(const std::string& message) {
  if (level() >= Level::Info) emit("info", message);
}

void debug(const std::string& message) {
  if (level() >= Level::Debug) emit("debug", message);
}

void warn(const std::string& message) {
  if (level() >= Level::Info) emit("warn", message);
}

}  // namespace lift::log
