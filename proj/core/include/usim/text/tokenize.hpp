#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace usim::text {

// True for codepoints treated as CJK: each becomes its own token.
bool is_cjk(char32_t cp);

// Splits UTF-8 text into tokens. CJK codepoints become single-character
// tokens; runs of other word characters become word tokens with ASCII
// letters folded to lower case; whitespace and punctuation delimit.
// Invalid UTF-8 bytes act as delimiters.
std::vector<std::string> tokenize(std::string_view text);

// Decodes one UTF-8 codepoint starting at `pos`; advances `pos` past it.
// Returns U+FFFD and advances by one byte on invalid input.
char32_t decode_utf8(std::string_view text, std::size_t& pos);

// Encodes a codepoint back to UTF-8.
std::string encode_utf8(char32_t cp);

// Trims ASCII whitespace and folds ASCII letters to lower case; used for
// lookup keys where byte-exact matching is too brittle.
std::string trim_casefold(std::string_view text);

}  // namespace usim::text
