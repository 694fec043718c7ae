#pragma once

// Exact cross-situational inference. Each task has its own hypothesis space;
// a hypothesis binds every novel word heard in the conditioning contexts. An
// option is supported when some surviving hypothesis binds all of its novel
// words and makes it a true description of the query scene.

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mewl/core.hpp"

namespace mewl {

struct Hypothesis {
  // Sorted by word text.
  std::vector<std::pair<std::string, Concept>> bindings;
  // Composite only: the attribute kind named at each utterance position.
  std::vector<AttributeKind> syntax;

  const Concept* find(std::string_view word) const;

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
  friend bool operator<(const Hypothesis& a, const Hypothesis& b) {
    if (a.bindings != b.bindings) return a.bindings < b.bindings;
    return a.syntax < b.syntax;
  }
};

struct SolveResult {
  int chosen_index = 0;
  std::size_t surviving_lexicons = 0;
  std::array<bool, kOptionCount> per_option_support{};

  int supported_count() const;
};

// Every hypothesis consistent with all given contexts, sorted. Throws
// MalformedEpisode when a context does not fit the task's template.
std::vector<Hypothesis> consistent_lexicons(Task task, std::span<const Panel> contexts,
                                            double delta = Geometry{}.delta);

// Whether `option` truthfully describes `query` under hypothesis `h`.
bool option_holds(Task task, const Hypothesis& h, const Scene& query, const Utterance& option,
                  double delta = Geometry{}.delta);

// Support flags using only the first k contexts; never throws on ambiguity.
// chosen_index is the lowest supported option, or 0 when none is.
SolveResult evaluate_support(const Episode& episode, int k = kContextCount);

// Full-information answer. Throws AmbiguousEpisode unless exactly one option
// is supported.
SolveResult answer(const Episode& episode);

// Conditioning on the first k contexts; ties go to the lowest option index.
SolveResult solve_ablated(const Episode& episode, int k);

// Relation margin the episode was generated with (metadata "delta", else the
// default).
double episode_delta(const Episode& episode);

}  // namespace mewl
