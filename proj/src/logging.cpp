#include "hyperalpha/logging.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace hyperalpha {

void configure_logging() {
  // Logs go to stderr so stdout stays machine-readable.
  static const auto logger = [] {
    auto l = spdlog::stderr_color_mt("hyperalpha");
    spdlog::set_default_logger(l);
    return l;
  }();
  auto level = spdlog::level::warn;
  if (const char* env = std::getenv("HYPERALPHA_LOG")) {
    const auto parsed = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept "off" when spelled out.
    if (parsed != spdlog::level::off || std::string(env) == "off") level = parsed;
  }
  logger->set_level(level);
}

}  // namespace hyperalpha
