#include "fdkp/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

#include "fdkp/error.hpp"

namespace fdkp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NonPositiveSymbol: return "NonPositiveSymbol";
    case ErrorCode::NonFiniteSymbol: return "NonFiniteSymbol";
    case ErrorCode::SingularLongWave: return "SingularLongWave";
    case ErrorCode::WrongModelOrder: return "WrongModelOrder";
    case ErrorCode::SubcriticalSpeed: return "SubcriticalSpeed";
    case ErrorCode::DomainTooNarrow: return "DomainTooNarrow";
    case ErrorCode::IncommensurateWavenumber: return "IncommensurateWavenumber";
    case ErrorCode::EigensolveFailure: return "EigensolveFailure";
    case ErrorCode::UnstableRun: return "UnstableRun";
    case ErrorCode::NoGrowthWindow: return "NoGrowthWindow";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::EigensolveFailure:
    case ErrorCode::UnstableRun:
    case ErrorCode::NoGrowthWindow:
    case ErrorCode::NonFiniteSymbol:
      return true;
    default:
      return false;
  }
}

namespace log {

namespace {

Level level_from_env() {
  const char* env = std::getenv("FDKP_LOG");
  if (env == nullptr) return Level::Warn;
  const std::string value(env);
  if (value == "error") return Level::Error;
  if (value == "info") return Level::Info;
  if (value == "debug") return Level::Debug;
  return Level::Warn;
}

std::atomic<int>& current() {
  static std::atomic<int> value{static_cast<int>(level_from_env())};
  return value;
}

void emit(Level at, std::string_view tag, std::string_view message) {
  if (static_cast<int>(at) > current().load()) return;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  std::cerr << "[fdkp " << tag << "] " << message << '\n';
}

}  // namespace

Level level() { return static_cast<Level>(current().load()); }
void set_level(Level level) { current().store(static_cast<int>(level)); }

void error(std::string_view message) { emit(Level::Error, "error", message); }
void warn(std::string_view message) { emit(Level::Warn, "warn", message); }
void info(std::string_view message) { emit(Level::Info, "info", message); }
void debug(std::string_view message) { emit(Level::Debug, "debug", message); }

}  // namespace log
}  // namespace fdkp
