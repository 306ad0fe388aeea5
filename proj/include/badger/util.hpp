#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace badger {

// Minimal glob: '*' matches any run of characters, everything else is
// literal and case-sensitive.
bool glob_match(std::string_view pattern, std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);
std::string trim(std::string_view text);

// Hex-encoded SHA-256 of a byte string.
std::string sha256_hex(std::string_view data);

}  // namespace badger
