#include "obd/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace obd {
namespace {

LogLevel parse_env() {
  const char* raw = std::getenv("OBD_LOG");
  if (raw == nullptr) return LogLevel::kOff;
  const std::string value(raw);
  if (value == "debug") return LogLevel::kDebug;
  if (value == "info") return LogLevel::kInfo;
  return LogLevel::kOff;
}

std::atomic<int>& level_storage() {
  static std::atomic<int> level{static_cast<int>(parse_env())};
  return level;
}

std::mutex& stream_mutex() {
  static std::mutex m;
  return m;
}

void emit(const char* tag, std::string_view message) {
  std::lock_guard<std::mutex> lock(stream_mutex());
  std::cerr << "[obd " << tag << "] " << message << '\n';
}

}  // namespace

LogLevel log_level() { return static_cast<LogLevel>(level_storage().load()); }

void set_log_level(LogLevel level) { level_storage().store(static_cast<int>(level)); }

void log_info(std::string_view message) {
  if (log_level() >= LogLevel::kInfo) emit("info", message);
}

void log_debug(std::string_view message) {
  if (log_level() >= LogLevel::kDebug) emit("debug", message);
}

}  // namespace obd
