#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace skillprobe {

// Canonical comparison form of a transcript: simple lowercase, Unicode
// punctuation (general category P*) deleted, White_Space runs collapsed to a
// single ASCII space, ends trimmed. Total and idempotent; ill-formed UTF-8
// sequences become U+FFFD.
std::string normalize(std::string_view text);

// True iff the normalized forms differ.
bool texts_differ(std::string_view a, std::string_view b);

// Words of the normalized text.
std::vector<std::string> normalized_words(std::string_view text);

std::size_t word_count(std::string_view text);

// Whole-word phrase containment on normalized forms: "resume" matches
// "would you like to resume" but not "resumed".
bool contains_phrase(std::string_view text, std::string_view phrase);

}  // namespace skillprobe
