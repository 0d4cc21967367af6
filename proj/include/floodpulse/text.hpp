#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace floodpulse::text {

// Decodes UTF-8, mapping invalid sequences to U+FFFD.
inline std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  const auto n = s.size();
  while (i < n) {
    const unsigned char b0 = static_cast<unsigned char>(s[i]);
    char32_t cp = 0xFFFD;
    std::size_t len = 1;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0 && i + 1 < n) {
      const unsigned char b1 = s[i + 1];
      if ((b1 & 0xC0) == 0x80) {
        cp = (char32_t(b0 & 0x1F) << 6) | (b1 & 0x3F);
        len = 2;
        if (cp < 0x80) cp = 0xFFFD;  // overlong
      }
    } else if ((b0 & 0xF0) == 0xE0 && i + 2 < n) {
      const unsigned char b1 = s[i + 1], b2 = s[i + 2];
      if ((b1 & 0xC0) == 0x80 && (b2 & 0xC0) == 0x80) {
        cp = (char32_t(b0 & 0x0F) << 12) | (char32_t(b1 & 0x3F) << 6) | (b2 & 0x3F);
        len = 3;
        if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
      }
    } else if ((b0 & 0xF8) == 0xF0 && i + 3 < n) {
      const unsigned char b1 = s[i + 1], b2 = s[i + 2], b3 = s[i + 3];
      if ((b1 & 0xC0) == 0x80 && (b2 & 0xC0) == 0x80 && (b3 & 0xC0) == 0x80) {
        cp = (char32_t(b0 & 0x07) << 18) | (char32_t(b1 & 0x3F) << 12) |
             (char32_t(b2 & 0x3F) << 6) | (b3 & 0x3F);
        len = 4;
        if (cp < 0x10000 || cp > 0x10FFFF) cp = 0xFFFD;
      }
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(char(cp));
  } else if (cp < 0x800) {
    out.push_back(char(0xC0 | (cp >> 6)));
    out.push_back(char(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(char(0xE0 | (cp >> 12)));
    out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(char(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(char(0xF0 | (cp >> 18)));
    out.push_back(char(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(char(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) append_utf8(out, cp);
  return out;
}

// Composition of combining marks over Latin base letters (the precomposed
// subset used by the shipped lexicon languages).
inline char32_t compose_pair(char32_t base, char32_t mark) {
  struct Entry {
    char32_t mark;
    const char* bases;      // ASCII base letters
    const char32_t* composed;  // parallel array
  };
  static constexpr char32_t grave[] = {0xE0, 0xE8, 0xEC, 0xF2, 0xF9, 0xC0, 0xC8, 0xCC, 0xD2, 0xD9};
  static constexpr char32_t acute[] = {0xE1, 0xE9, 0xED, 0xF3, 0xFA, 0xFD, 0xC1, 0xC9, 0xCD, 0xD3, 0xDA, 0xDD};
  static constexpr char32_t circ[] = {0xE2, 0xEA, 0xEE, 0xF4, 0xFB, 0xC2, 0xCA, 0xCE, 0xD4, 0xDB};
  static constexpr char32_t tilde[] = {0xE3, 0xF1, 0xF5, 0xC3, 0xD1, 0xD5};
  static constexpr char32_t diaer[] = {0xE4, 0xEB, 0xEF, 0xF6, 0xFC, 0xFF, 0xC4, 0xCB, 0xCF, 0xD6, 0xDC, 0x178};
  static constexpr char32_t ced[] = {0xE7, 0xC7};
  static constexpr char32_t ring[] = {0xE5, 0xC5};
  static const Entry table[] = {
      {0x300, "aeiouAEIOU", grave},    {0x301, "aeiouyAEIOUY", acute},
      {0x302, "aeiouAEIOU", circ},     {0x303, "anoANO", tilde},
      {0x308, "aeiouyAEIOUY", diaer},  {0x327, "cC", ced},
      {0x30A, "aA", ring},
  };
  for (const auto& e : table) {
    if (e.mark != mark) continue;
    for (std::size_t i = 0; e.bases[i]; ++i)
      if (char32_t(e.bases[i]) == base) return e.composed[i];
  }
  return 0;
}

/// Canonical composition limited to Latin letter + combining mark pairs.
inline std::u32string nfc_compose(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (char32_t cp : s) {
    if (!out.empty() && cp >= 0x300 && cp <= 0x36F) {
      if (char32_t composed = compose_pair(out.back(), cp)) {
        out.back() = composed;
        continue;
      }
    }
    out.push_back(cp);
  }
  return out;
}

// Simple lowercase mapping: ASCII, Latin-1 supplement, Latin Extended-A.
inline char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp == 0x178) return 0xFF;  // Y with diaeresis
  if (cp >= 0x100 && cp <= 0x137) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x139 && cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x14A && cp <= 0x177) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x179 && cp <= 0x17E) return (cp % 2 == 1) ? cp + 1 : cp;
  return cp;
}

/// Letter classification used for word boundaries. Digits, underscore,
/// punctuation, symbols and emoji are boundaries.
inline bool is_letter(char32_t cp) {
  if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return true;
  if (cp >= 0xC0 && cp <= 0xFF) return cp != 0xD7 && cp != 0xF7;
  if (cp >= 0x100 && cp <= 0x24F) return true;   // Latin extended
  if (cp >= 0x370 && cp <= 0x1FFF) return true;  // Greek, Cyrillic, ...
  if (cp >= 0x2E80 && cp <= 0x9FFF) return true;  // CJK
  if (cp >= 0xAC00 && cp <= 0xD7A3) return true;  // Hangul
  return false;
}

/// NFC-composes and lowercases a UTF-8 string.
inline std::string fold(std::string_view utf8) {
  std::u32string cps = nfc_compose(decode_utf8(utf8));
  for (auto& cp : cps) cp = to_lower(cp);
  return encode_utf8(cps);
}

/// Maximal letter runs of the folded text, re-encoded as UTF-8.
inline std::vector<std::string> word_tokens(std::string_view utf8) {
  std::u32string cps = nfc_compose(decode_utf8(utf8));
  std::vector<std::string> tokens;
  std::u32string run;
  auto flush = [&] {
    if (!run.empty()) {
      tokens.push_back(encode_utf8(run));
      run.clear();
    }
  };
  for (char32_t cp : cps) {
    if (is_letter(cp))
      run.push_back(to_lower(cp));
    else
      flush();
  }
  flush();
  return tokens;
}

/// Whole-word, case-insensitive match against a folded keyword set.
inline bool contains_any_keyword(std::string_view utf8, const std::set<std::string>& keywords) {
  for (const auto& tok : word_tokens(utf8))
    if (keywords.count(tok)) return true;
  return false;
}

}  // namespace floodpulse::text
