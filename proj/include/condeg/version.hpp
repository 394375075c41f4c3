#pragma once

namespace condeg {

const char* version();

}  // namespace condeg
