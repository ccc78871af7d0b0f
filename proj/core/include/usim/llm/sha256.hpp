#pragma once

#include <string>
#include <string_view>

namespace usim::llm {

// Hex-encoded SHA-256 digest; used for content-addressed cache keys.
std::string sha256_hex(std::string_view data);

}  // namespace usim::llm
