#pragma once

#include <memory>

namespace spdlog {
class logger;
}

namespace stn {

/// Library logger. Writes to stderr so stdout stays free for machine-readable output.
spdlog::logger& log();

}  // namespace stn
