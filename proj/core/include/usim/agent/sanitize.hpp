#pragma once

#include <optional>
#include <string>
#include <vector>

namespace usim::agent {

// Reduces a completion to a bare single-line query: drops code fences and
// label prefixes, takes the first non-empty line, strips surrounding quotes.
// nullopt when nothing usable (empty or over `max_chars`) remains.
std::optional<std::string> sanitize_query(const std::string& raw, std::size_t max_chars = 256);

// Extracts clicked ranks from a completion: "none" / "no click" / "[]" mean
// an explicit empty set; otherwise every integer in the text is taken, then
// deduplicated, filtered to 1..n_ranks, sorted ascending, and capped at
// max_clicks. nullopt when the output is unrecognizable.
std::optional<std::vector<int>> parse_click_ranks(const std::string& raw, int n_ranks,
                                                  int max_clicks);

// Maps free text onto the binary stop decision by keyword ("stop"/"停止" vs
// "continue"/"继续"). nullopt when neither or both appear.
std::optional<bool> parse_stop_decision(const std::string& raw);

// Strips a leading reasoning label ("Reasoning:") and trims whitespace.
std::string strip_reasoning_prefix(const std::string& raw);

}  // namespace usim::agent
