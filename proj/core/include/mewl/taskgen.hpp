#pragma once

// Episode generators for the nine tasks. Every generator runs a rejection
// loop: build a candidate, certify it with the solver, and keep it only when
// exactly one option is supported.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mewl/core.hpp"
#include "mewl/lexicon.hpp"
#include "mewl/rng.hpp"

namespace mewl {

enum class Split : std::uint8_t { train, val, test };

inline constexpr std::array<Split, 3> kSplits = {Split::train, Split::val, Split::test};

std::string_view split_name(Split split);
std::optional<Split> parse_split(std::string_view name);

struct SplitCounts {
  int train = 3000;
  int val = 600;
  int test = 600;

  int of(Split split) const;
  int& of(Split split);
};

struct GenConfig {
  std::uint64_t global_seed = 0;
  std::map<Task, SplitCounts> counts = default_counts();
  Geometry geometry;
  int max_regen_attempts = 1000;

  static std::map<Task, SplitCounts> default_counts();

  // key=value lines, '#' comments. Keys: global_seed, delta, d_min, arena,
  // max_regen_attempts, train, val, test (all tasks) and <task>.<split>.
  static GenConfig parse(std::string_view text);
  static GenConfig load(const std::filesystem::path& path);

  int count(Task task, Split split) const;
  int total(Split split) const;
};

struct GenOptions {
  Geometry geometry;
  int max_regen_attempts = 1000;
  const SyllableInventory* inventory = &SyllableInventory::builtin();
};

struct CertReport {
  int supported_option_count = 0;
  std::size_t surviving_lexicon_count = 0;
  int attempts_used = 0;
  bool answer_supported = false;

  bool accepted() const { return supported_option_count == 1 && answer_supported; }
};

// Runs the solver over the full episode; never throws on ambiguity.
CertReport certify(const Episode& episode);

Episode gen_attribute_episode(AttributeKind kind, Rng& rng, const GenOptions& options = {});
Episode gen_object_episode(Rng& rng, const GenOptions& options = {});
Episode gen_composite_episode(Rng& rng, const GenOptions& options = {});
Episode gen_relation_episode(Rng& rng, const GenOptions& options = {});
Episode gen_bootstrap_episode(Rng& rng, const GenOptions& options = {});
Episode gen_number_episode(Rng& rng, const GenOptions& options = {});
Episode gen_pragmatic_episode(Rng& rng, const GenOptions& options = {});

// Dispatches to the task's generator and returns the accepting certification.
std::pair<Episode, CertReport> generate_certified(Task task, Rng& rng,
                                                  const GenOptions& options = {});

// Copy whose query is one of the context scenes and whose answer is that
// context's utterance.
Episode gen_attention_check(const Episode& episode, Rng& rng);

std::string episode_id(Split split, Task task, int index);
std::uint64_t episode_seed(std::uint64_t global_seed, Split split, Task task, int index);

// Regenerates episode `index` of (split, task) from the config alone.
Episode generate_episode(const GenConfig& config, Split split, Task task, int index);

// All episodes of a split, tasks in table order, indices ascending.
std::vector<Episode> generate_split(const GenConfig& config, Split split,
                                    const std::vector<Task>& tasks = {kTasks.begin(), kTasks.end()},
                                    unsigned threads = 0);

}  // namespace mewl
