#include "stn/logging.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace stn {

spdlog::logger& log()
{
    static std::shared_ptr<spdlog::logger> logger = [] {
        auto existing = spdlog::get("stn");
        return existing ? existing : spdlog::stderr_color_mt("stn");
    }();
    return *logger;
}

}  // namespace stn
