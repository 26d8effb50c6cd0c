#include "stn/error.hpp"

namespace stn {

void throw_invalid(const std::string& what)
{
    throw InvalidArgument(what);
}

}  // namespace stn
