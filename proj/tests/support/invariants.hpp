#pragma once

// Structural checks on generated episodes. Each returns an empty string when
// the episode conforms, otherwise a short description of the first failure.

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "mewl/caption.hpp"
#include "mewl/core.hpp"
#include "mewl/lexicon.hpp"
#include "mewl/solver.hpp"
#include "mewl/taskgen.hpp"

namespace mewl::invariants {

inline std::map<std::string, int> word_usage(const Episode& ep) {
  std::map<std::string, int> n;
  for (const auto& p : ep.contexts) {
    std::set<std::string> once;
    for (const auto& t : p.utterance.tokens) {
      if (!is_familiar_token(t)) once.insert(t);
    }
    for (const auto& t : once) ++n[t];
  }
  return n;
}

inline std::string common(const Episode& ep) {
  if (ep.contexts.size() != 6) return "context count";
  if (ep.options.size() != 5) return "option count";
  std::set<Utterance> distinct(ep.options.begin(), ep.options.end());
  if (distinct.size() != 5) return "duplicate options";
  if (ep.answer_index < 0 || ep.answer_index > 4) return "answer index";
  auto cert = certify(ep);
  if (!cert.accepted()) return "not uniquely solvable";
  if (cert.surviving_lexicon_count != 1) return "lexicon not pinned down";
  if (!ep.lexicon.is_injective()) return "lexicon not injective";
  for (const auto& e : ep.lexicon.entries()) {
    if (static_cast<int>(e.word.syllables.size()) != syllables_for(ep.task)) return "syllable count";
    if (is_real_word(e.word)) return "real word " + e.word.text;
  }
  const double delta = episode_delta(ep);
  for (const auto& p : ep.contexts) {
    try {
      p.scene.validate();
      caption_scene(ep.task, p.scene, delta);
    } catch (const std::exception& e) {
      return std::string("context scene: ") + e.what();
    }
  }
  try {
    ep.query.validate();
    caption_scene(ep.task, ep.query, delta);
  } catch (const std::exception& e) {
    return std::string("query scene: ") + e.what();
  }
  return {};
}

inline std::string per_task(const Episode& ep) {
  auto usage = word_usage(ep);
  switch (ep.task) {
    case Task::shape:
    case Task::color:
    case Task::material: {
      if (usage.size() != 3) return "attribute word count";
      for (const auto& [w, n] : usage) {
        if (n != 2) return "attribute word usage not {2,2,2}";
        const auto* v = std::get_if<AttributeValue>(ep.lexicon.find(w));
        if (!v || v->kind() != attribute_task_kind(ep.task)) return "word names the wrong kind";
      }
      for (const auto& p : ep.contexts) {
        if (p.scene.objects.size() != 1) return "attribute scene size";
      }
      return {};
    }
    case Task::object: {
      if (usage.size() != 6) return "object word count";
      std::set<std::set<ObjectType>> scenes;
      for (const auto& p : ep.contexts) {
        if (p.scene.objects.size() != 3) return "object scene size";
        std::set<ObjectType> types;
        for (const auto& o : p.scene.objects) types.insert(o.type);
        if (types.size() != 3) return "repeated object in scene";
        scenes.insert(types);
      }
      std::set<ObjectType> q;
      for (const auto& o : ep.query.objects) q.insert(o.type);
      scenes.insert(q);
      if (scenes.size() != 7) return "duplicate object combination";
      return {};
    }
    case Task::composite: {
      if (usage.size() != 6) return "composite word count";
      std::set<Utterance> phrases;
      for (const auto& p : ep.contexts) {
        if (p.scene.objects.size() != 1) return "composite scene size";
        phrases.insert(p.utterance);
      }
      if (phrases.size() != 6) return "duplicate attribute pair";
      if (phrases.contains(ep.options[static_cast<std::size_t>(ep.answer_index)])) {
        return "query pair seen in context";
      }
      return {};
    }
    case Task::relation: {
      if (usage.size() != 3) return "relation word count";
      for (const auto& [w, n] : usage) {
        if (n != 2) return "relation word not used exactly twice";
      }
      for (const auto& p : ep.contexts) {
        if (p.scene.objects.size() != 3) return "relation scene size";
      }
      return {};
    }
    case Task::bootstrap: {
      if (usage.size() != 6) return "bootstrap word count";
      for (const auto& [w, n] : usage) {
        if (n < 2) return "bootstrap word used fewer than twice";
      }
      std::set<std::set<std::string>> pairs;
      for (const auto& p : ep.contexts) {
        pairs.insert({p.utterance.tokens[0], p.utterance.tokens[2]});
      }
      if (pairs.size() != 6) return "duplicate bootstrap pair";
      return {};
    }
    case Task::number: {
      std::vector<int> counts;
      for (const auto& p : ep.contexts) counts.push_back(count_objects(p.scene));
      std::sort(counts.begin(), counts.end());
      if (counts != std::vector<int>{1, 2, 3, 4, 5, 6}) return "counts not a permutation of 1..6";
      return {};
    }
    case Task::pragmatic: {
      if (usage.size() != 6) return "pragmatic word count";
      auto singleton = [](const Scene& s, const Concept* meaning) {
        if (!s.pointed || s.objects.size() != 3) return false;
        auto u = unique_attributes(s, *s.pointed);
        const auto* v = meaning ? std::get_if<AttributeValue>(meaning) : nullptr;
        return u.size() == 1 && (!v || u.contains(*v));
      };
      for (const auto& p : ep.contexts) {
        if (!singleton(p.scene, ep.lexicon.find(p.utterance.tokens[0]))) return "unique attribute not a singleton";
      }
      if (!singleton(ep.query, ep.lexicon.find(ep.options[static_cast<std::size_t>(ep.answer_index)].tokens[0]))) {
        return "query unique attribute not a singleton";
      }
      return {};
    }
  }
  return {};
}

inline std::string check(const Episode& ep) {
  if (auto e = common(ep); !e.empty()) return e;
  return per_task(ep);
}

}  // namespace mewl::invariants
