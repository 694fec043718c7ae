#pragma once

// Pseudo-word synthesis from a syllable inventory with real-word rejection.

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mewl/core.hpp"
#include "mewl/rng.hpp"

namespace mewl {

class SyllableInventory {
 public:
  // One syllable per line; '#' starts a comment. Throws PreconditionError on
  // empty, duplicate or non-alphabetic entries.
  static SyllableInventory parse(std::string_view text, std::string source_label);
  static SyllableInventory load(const std::filesystem::path& path);
  // The shipped 175-syllable inventory.
  static const SyllableInventory& builtin();

  std::span<const std::string> syllables() const noexcept { return syllables_; }
  const std::string& source_label() const noexcept { return source_label_; }
  std::size_t size() const noexcept { return syllables_.size(); }
  bool contains(std::string_view syllable) const;

 private:
  std::vector<std::string> syllables_;
  std::unordered_set<std::string> index_;
  std::string source_label_;
};

class WordList {
 public:
  static WordList parse(std::string_view text);
  static WordList load(const std::filesystem::path& path);
  // Bundled 10k most frequent English words.
  static std::shared_ptr<const WordList> common_english();

  bool contains(std::string_view word) const { return words_.contains(std::string(word)); }
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

struct WordPolicy {
  int syllable_count = 2;
  std::shared_ptr<const WordList> forbidden = WordList::common_english();
  int max_attempts = 1000;
};

Word make_pseudoword(std::span<const std::string> syllables);

// n distinct words not in policy.forbidden, not familiar English tokens, and
// not in `exclude`. Throws GenerationExhausted after policy.max_attempts
// rejected candidates.
std::vector<Word> sample_words(int n, const WordPolicy& policy, Rng& rng,
                               const SyllableInventory& inventory = SyllableInventory::builtin(),
                               std::span<const Word> exclude = {});

// Membership in the bundled common-English list.
bool is_real_word(const Word& w);

}  // namespace mewl
