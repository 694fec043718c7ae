#include "mewl/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace mewl {
namespace detail {
extern const std::string_view kBuiltinSyllables;
extern const std::string_view kBuiltinWordList;
}  // namespace detail

namespace {

std::vector<std::string> parse_lines(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(first, last - first + 1));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_lower_alpha(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::islower(c) != 0;
  });
}

}  // namespace

SyllableInventory SyllableInventory::parse(std::string_view text, std::string source_label) {
  SyllableInventory inv;
  inv.source_label_ = std::move(source_label);
  for (auto& s : parse_lines(text)) {
    if (!is_lower_alpha(s)) {
      throw PreconditionError("syllable '" + s + "' is not lowercase alphabetic");
    }
    if (!inv.index_.insert(s).second) throw PreconditionError("duplicate syllable '" + s + "'");
    inv.syllables_.push_back(std::move(s));
  }
  if (inv.syllables_.empty()) throw PreconditionError("syllable inventory is empty");
  return inv;
}

SyllableInventory SyllableInventory::load(const std::filesystem::path& path) {
  return parse(read_file(path), path.string());
}

const SyllableInventory& SyllableInventory::builtin() {
  static const SyllableInventory inv = parse(detail::kBuiltinSyllables, "builtin:syllables_175");
  return inv;
}

bool SyllableInventory::contains(std::string_view syllable) const {
  return index_.contains(std::string(syllable));
}

WordList WordList::parse(std::string_view text) {
  WordList list;
  for (auto& w : parse_lines(text)) {
    std::transform(w.begin(), w.end(), w.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    list.words_.insert(std::move(w));
  }
  return list;
}

WordList WordList::load(const std::filesystem::path& path) { return parse(read_file(path)); }

std::shared_ptr<const WordList> WordList::common_english() {
  static const auto list = std::make_shared<const WordList>(parse(detail::kBuiltinWordList));
  return list;
}

Word make_pseudoword(std::span<const std::string> syllables) {
  if (syllables.empty()) throw EmptySyllableList();
  if (syllables.size() > 3) throw PreconditionError("pseudo-words have at most 3 syllables");
  Word w;
  for (const auto& s : syllables) {
    if (!is_lower_alpha(s)) throw PreconditionError("syllable '" + s + "' is not lowercase alphabetic");
    w.text += s;
    w.syllables.push_back(s);
  }
  return w;
}

std::vector<Word> sample_words(int n, const WordPolicy& policy, Rng& rng,
                               const SyllableInventory& inventory, std::span<const Word> exclude) {
  if (n < 1) throw PreconditionError("sample_words needs n >= 1");
  if (policy.syllable_count != 2 && policy.syllable_count != 3) {
    throw PreconditionError("syllable_count must be 2 or 3");
  }
  if (policy.max_attempts < 1) throw PreconditionError("max_attempts must be positive");

  std::unordered_set<std::string> taken;
  for (const auto& w : exclude) taken.insert(w.text);

  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(n));
  std::vector<std::string> parts(static_cast<std::size_t>(policy.syllable_count));
  int rejections = 0;
  while (static_cast<int>(out.size()) < n) {
    for (auto& p : parts) p = rng.pick(inventory.syllables());
    Word w = make_pseudoword(parts);
    bool rejected = taken.contains(w.text) || is_familiar_token(w.text) ||
                    (policy.forbidden && policy.forbidden->contains(w.text));
    if (rejected) {
      if (++rejections >= policy.max_attempts) {
        throw GenerationExhausted("sample_words: " + std::to_string(rejections) +
                                  " candidates rejected");
      }
      continue;
    }
    taken.insert(w.text);
    out.push_back(std::move(w));
  }
  return out;
}

bool is_real_word(const Word& w) { return WordList::common_english()->contains(w.text); }

}  // namespace mewl
