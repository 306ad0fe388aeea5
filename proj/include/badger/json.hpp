#pragma once

#include <nlohmann/json.hpp>

namespace badger {

// Insertion-ordered so identical queries serialize to identical bytes.
using Json = nlohmann::ordered_json;

}  // namespace badger
