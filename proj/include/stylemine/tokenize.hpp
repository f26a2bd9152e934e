#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace stylemine {

// Whitespace and punctuation segmentation. Punctuation characters become
// single-character tokens; English clitics ('s, n't, 're, ...) split off the
// preceding word; hyphens inside words and separators inside numbers
// ("3.5", "1,000") stay attached. Bytes >= 0x80 count as word characters.
std::vector<std::string> tokenize(std::string_view text);

std::string to_lower_ascii(std::string_view s);

// Lowercase plus a small suffix stemmer (s / es / ies / ed / ing) iterated
// to a fixed point, so normalize is idempotent.
std::string normalize_token(std::string_view token);
std::vector<std::string> normalize(const std::vector<std::string>& tokens);

bool is_punctuation(std::string_view token);
bool is_numeric(std::string_view token);

}  // namespace stylemine
