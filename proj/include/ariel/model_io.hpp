#pragma once

#include "ariel/language_model.hpp"

#include <memory>
#include <string>
#include <string_view>

namespace ariel {

inline constexpr std::uint32_t kModelFormatVersion = 1;

/// Versioned little-endian container: magic, version, kind tag, vocabulary
/// hash, embedded vocabulary, model payload, FNV-1a checksum of all
/// preceding bytes.
std::string serialize_model(const LanguageModel& lm);

/// Throws FormatError on bad magic, version, truncation or checksum, and
/// VocabularyError when `expected` is given and its hash differs.
std::unique_ptr<LanguageModel> deserialize_model(std::string_view bytes, const Vocabulary* expected = nullptr);

void save_model(const LanguageModel& lm, const std::string& path);
std::unique_ptr<LanguageModel> load_model(const std::string& path, const Vocabulary* expected = nullptr);

/// Human-readable JSON dump (counts, parameters). Not read back.
std::string model_debug_json(const LanguageModel& lm);

}  // namespace ariel
