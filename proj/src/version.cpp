#include "condeg/version.hpp"

namespace condeg {

const char* version() { return "0.1.0"; }

}  // namespace condeg
