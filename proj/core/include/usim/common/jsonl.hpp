#pragma once

#include <cstddef>
#include <functional>
#include <istream>
#include <string>

#include "json.hpp"

namespace usim {

// Calls `fn(record, line_number)` for every non-blank line of a line-delimited
// JSON stream. Line numbers are 1-based. Throws ParseError on malformed JSON.
void for_each_jsonl(std::istream& in,
                    const std::function<void(const nlohmann::json&, std::size_t)>& fn);

// Writes `text` to `path` atomically (write to a sibling temp file, rename).
void atomic_write_file(const std::string& path, const std::string& text);

// Reads a whole file into a string. Throws Error if the file cannot be opened.
std::string read_file(const std::string& path);

}  // namespace usim
