#include "usim/text/tokenize.hpp"

#include <cctype>

namespace usim::text {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

bool in_range(char32_t cp, char32_t lo, char32_t hi) { return cp >= lo && cp <= hi; }

// Punctuation/space blocks commonly found in zh/en query text.
bool is_delimiter(char32_t cp) {
  if (cp < 0x80) {
    return !(std::isalnum(static_cast<unsigned char>(cp)) != 0);
  }
  return in_range(cp, 0x2000, 0x206F) ||  // general punctuation
         in_range(cp, 0x3000, 0x303F) ||  // CJK symbols and punctuation
         in_range(cp, 0xFF00, 0xFF0F) ||  // fullwidth punctuation runs
         in_range(cp, 0xFF1A, 0xFF20) ||
         in_range(cp, 0xFF3B, 0xFF40) ||
         in_range(cp, 0xFF5B, 0xFF65) ||
         cp == kReplacement;
}

char to_folded_ascii(char32_t cp) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(cp)));
}

}  // namespace

bool is_cjk(char32_t cp) {
  return in_range(cp, 0x3400, 0x4DBF) ||    // CJK extension A
         in_range(cp, 0x4E00, 0x9FFF) ||    // CJK unified ideographs
         in_range(cp, 0xF900, 0xFAFF) ||    // compatibility ideographs
         in_range(cp, 0x20000, 0x2FA1F) ||  // extensions B..F
         in_range(cp, 0x3040, 0x30FF) ||    // hiragana, katakana
         in_range(cp, 0xAC00, 0xD7AF);      // hangul syllables
}

char32_t decode_utf8(std::string_view text, std::size_t& pos) {
  const auto byte = [&](std::size_t i) -> unsigned char {
    return static_cast<unsigned char>(text[i]);
  };
  const unsigned char b0 = byte(pos);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++pos;
    return kReplacement;
  }
  if (pos + len > text.size()) {
    ++pos;
    return kReplacement;
  }
  for (std::size_t i = 1; i < len; ++i) {
    const unsigned char b = byte(pos + i);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return kReplacement;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  // Reject overlong encodings and surrogates.
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
      (len == 4 && cp < 0x10000) || (cp >= 0xD800 && cp <= 0xDFFF) ||
      cp > 0x10FFFF) {
    ++pos;
    return kReplacement;
  }
  pos += len;
  return cp;
}

std::string encode_utf8(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

std::string trim_casefold(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin])) != 0) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1])) != 0) --end;
  std::string out(text.substr(begin, end - begin));
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string word;
  const auto flush_word = [&] {
    if (!word.empty()) {
      tokens.push_back(word);
      word.clear();
    }
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = decode_utf8(text, pos);
    if (is_cjk(cp)) {
      flush_word();
      tokens.push_back(encode_utf8(cp));
    } else if (is_delimiter(cp)) {
      flush_word();
    } else if (cp < 0x80) {
      word.push_back(to_folded_ascii(cp));
    } else {
      word += encode_utf8(cp);
    }
  }
  flush_word();
  return tokens;
}

}  // namespace usim::text
