#pragma once

#include <cstdint>

namespace badger {

using NodeId = uint32_t;

}  // namespace badger
