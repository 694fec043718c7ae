#include "mewl/solver.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>

namespace mewl {
namespace {

using Assignment = std::vector<Concept>;
using FinalCheck = std::function<bool(const std::vector<std::string>&, const Assignment&)>;

[[noreturn]] void malformed(Task task, const std::string& what) {
  throw MalformedEpisode(std::string(task_name(task)) + " context: " + what);
}

// Enumerates assignments word[i] -> one of candidates[i], optionally
// injective, keeping those that pass `check`.
std::vector<Hypothesis> enumerate(const std::vector<std::string>& words,
                                  const std::vector<std::vector<Concept>>& candidates,
                                  bool injective, const FinalCheck& check,
                                  const std::vector<AttributeKind>& syntax = {}) {
  std::vector<Hypothesis> out;
  const std::size_t m = words.size();
  for (const auto& c : candidates) {
    if (c.empty()) return out;
  }
  // Most constrained words first.
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].size() < candidates[b].size();
  });

  Assignment current(m);
  std::function<void(std::size_t)> step = [&](std::size_t depth) {
    if (depth == m) {
      if (check && !check(words, current)) return;
      Hypothesis h;
      h.syntax = syntax;
      for (std::size_t i = 0; i < m; ++i) h.bindings.emplace_back(words[i], current[i]);
      std::sort(h.bindings.begin(), h.bindings.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      out.push_back(std::move(h));
      return;
    }
    std::size_t w = order[depth];
    for (const Concept& c : candidates[w]) {
      if (injective) {
        bool used = false;
        for (std::size_t d = 0; d < depth && !used; ++d) used = current[order[d]] == c;
        if (used) continue;
      }
      current[w] = c;
      step(depth + 1);
    }
  };
  step(0);
  return out;
}

// Novel words in order of first appearance.
struct WordIndex {
  std::vector<std::string> words;
  std::map<std::string, std::size_t> index;

  std::size_t add(const std::string& w) {
    auto [it, inserted] = index.emplace(w, words.size());
    if (inserted) words.push_back(w);
    return it->second;
  }
};

bool novel(const std::string& token) { return !token.empty() && !is_familiar_token(token); }

std::vector<Concept> to_concepts(AttributeSet s) {
  std::vector<Concept> out;
  for (auto v : s.values()) out.emplace_back(v);
  return out;
}

std::vector<Concept> to_concepts(RelationSet s) {
  std::vector<Concept> out;
  for (auto r : s.values()) out.emplace_back(r);
  return out;
}

const std::string& single_word(Task task, const Panel& p) {
  if (p.utterance.tokens.size() != 1 || !novel(p.utterance.tokens[0])) {
    malformed(task, "expected a single novel word, got '" + p.utterance.text() + "'");
  }
  return p.utterance.tokens[0];
}

// Object-task words: w and w and w.
std::vector<std::string> conjunct_words(const Utterance& u) {
  std::vector<std::string> out;
  const auto& t = u.tokens;
  if (t.empty() || t.size() % 2 == 0) return {};
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i % 2 == 1) {
      if (t[i] != "and") return {};
    } else {
      if (!novel(t[i])) return {};
      out.push_back(t[i]);
    }
  }
  return out;
}

struct RelationUtterance {
  std::string color_a, shape_a, word, color_b, shape_b;
};

std::optional<RelationUtterance> parse_relation_utterance(const Utterance& u) {
  const auto& t = u.tokens;
  if (t.size() != 5 || !novel(t[2])) return std::nullopt;
  return RelationUtterance{t[0], t[1], t[2], t[3], t[4]};
}

struct BootstrapUtterance {
  std::string word_a;
  Relation relation;
  std::string word_b;
};

std::optional<BootstrapUtterance> parse_bootstrap_utterance(const Utterance& u) {
  const auto& t = u.tokens;
  if (t.size() != 3 || !novel(t[0]) || !novel(t[2]) || t[0] == t[2]) return std::nullopt;
  auto rel = parse_relation(t[1]);
  if (!rel) return std::nullopt;
  return BootstrapUtterance{t[0], *rel, t[2]};
}

bool has_related_pair(const Scene& scene, const ObjectType& a, Relation r, const ObjectType& b,
                      double delta) {
  for (const auto& oa : scene.objects) {
    if (oa.type != a) continue;
    for (const auto& ob : scene.objects) {
      if (ob.id == oa.id || ob.type != b) continue;
      if (relations_between(oa.position, ob.position, delta).contains(r)) return true;
    }
  }
  return false;
}

bool scene_has_type(const Scene& scene, const ObjectType& t) {
  return std::any_of(scene.objects.begin(), scene.objects.end(),
                     [&](const ObjectSpec& o) { return o.type == t; });
}

std::set<ObjectType> type_set(const Scene& scene) {
  std::set<ObjectType> s;
  for (const auto& o : scene.objects) s.insert(o.type);
  return s;
}

// --- per-task hypothesis spaces -------------------------------------------

std::vector<Hypothesis> solve_attribute(Task task, std::span<const Panel> ctx) {
  WordIndex wi;
  std::vector<AttributeSet> cand;
  for (const auto& p : ctx) {
    const std::string& w = single_word(task, p);
    if (p.scene.objects.size() != 1) malformed(task, "expected exactly one object");
    std::size_t i = wi.add(w);
    if (i == cand.size()) cand.push_back(AttributeSet::full());
    cand[i] = cand[i] & p.scene.objects[0].type.attributes();
  }
  std::vector<std::vector<Concept>> lists;
  for (auto s : cand) lists.push_back(to_concepts(s));
  return enumerate(wi.words, lists, true, nullptr);
}

std::vector<Hypothesis> solve_number(std::span<const Panel> ctx) {
  WordIndex wi;
  std::vector<std::optional<int>> count;
  std::vector<bool> conflict;
  for (const auto& p : ctx) {
    std::size_t i = wi.add(single_word(Task::number, p));
    int n = count_objects(p.scene);
    if (i == count.size()) {
      count.emplace_back(n);
      conflict.push_back(false);
    } else if (count[i] != n) {
      conflict[i] = true;
    }
  }
  std::vector<std::vector<Concept>> lists;
  for (std::size_t i = 0; i < count.size(); ++i) {
    if (conflict[i] || *count[i] < 1 || *count[i] > 6) {
      lists.emplace_back();
    } else {
      lists.push_back({Count{*count[i]}});
    }
  }
  return enumerate(wi.words, lists, true, nullptr);
}

std::vector<Hypothesis> solve_pragmatic(std::span<const Panel> ctx) {
  WordIndex wi;
  std::vector<AttributeSet> cand;
  for (const auto& p : ctx) {
    const std::string& w = single_word(Task::pragmatic, p);
    if (!p.scene.pointed) malformed(Task::pragmatic, "scene has no pointed object");
    std::size_t i = wi.add(w);
    if (i == cand.size()) cand.push_back(AttributeSet::full());
    cand[i] = cand[i] & unique_attributes(p.scene, *p.scene.pointed);
  }
  std::vector<std::vector<Concept>> lists;
  for (auto s : cand) lists.push_back(to_concepts(s));
  return enumerate(wi.words, lists, true, nullptr);
}

std::vector<Hypothesis> solve_object(std::span<const Panel> ctx) {
  WordIndex wi;
  std::vector<std::vector<bool>> word_member;
  std::map<ObjectType, std::vector<bool>> type_member;
  const std::size_t n = ctx.size();
  for (std::size_t c = 0; c < n; ++c) {
    auto words = conjunct_words(ctx[c].utterance);
    if (words.empty()) malformed(Task::object, "expected 'w and w and w'");
    for (const auto& w : words) {
      std::size_t i = wi.add(w);
      if (i == word_member.size()) word_member.emplace_back(n, false);
      word_member[i][c] = true;
    }
    for (const auto& o : ctx[c].scene.objects) {
      auto [it, _] = type_member.try_emplace(o.type, n, false);
      it->second[c] = true;
    }
  }
  // Set equality plus injectivity forces a word and its object to occur in
  // exactly the same contexts.
  std::vector<std::vector<Concept>> lists;
  for (const auto& wm : word_member) {
    std::vector<Concept> l;
    for (const auto& [t, tm] : type_member) {
      if (tm == wm) l.emplace_back(t);
    }
    lists.push_back(std::move(l));
  }
  FinalCheck check = [&](const std::vector<std::string>& words, const Assignment& a) {
    std::map<std::string, ObjectType> m;
    for (std::size_t i = 0; i < words.size(); ++i) m[words[i]] = std::get<ObjectType>(a[i]);
    for (const auto& p : ctx) {
      std::set<ObjectType> named;
      for (const auto& w : conjunct_words(p.utterance)) named.insert(m.at(w));
      if (named != type_set(p.scene)) return false;
    }
    return true;
  };
  return enumerate(wi.words, lists, true, check);
}

std::vector<Hypothesis> solve_composite(std::span<const Panel> ctx) {
  WordIndex wi;
  struct Use {
    std::size_t position;
    ObjectType object;
  };
  std::vector<std::vector<Use>> uses;
  for (const auto& p : ctx) {
    const auto& t = p.utterance.tokens;
    if (t.size() != 2 || !novel(t[0]) || !novel(t[1]) || t[0] == t[1]) {
      malformed(Task::composite, "expected two novel words");
    }
    if (p.scene.objects.size() != 1) malformed(Task::composite, "expected exactly one object");
    for (std::size_t pos = 0; pos < 2; ++pos) {
      std::size_t i = wi.add(t[pos]);
      if (i == uses.size()) uses.emplace_back();
      uses[i].push_back({pos, p.scene.objects[0].type});
    }
  }
  std::vector<Hypothesis> out;
  for (AttributeKind first : kNameableKinds) {
    for (AttributeKind second : kNameableKinds) {
      if (first == second) continue;
      const std::array<AttributeKind, 2> syntax = {first, second};
      std::vector<std::vector<Concept>> lists;
      for (const auto& word_uses : uses) {
        AttributeSet s = AttributeSet::full();
        for (const auto& u : word_uses) {
          AttributeSet one;
          one.insert(u.object.value(syntax[u.position]));
          s = s & one;
        }
        lists.push_back(to_concepts(s));
      }
      auto part = enumerate(wi.words, lists, true, nullptr, {first, second});
      out.insert(out.end(), part.begin(), part.end());
    }
  }
  return out;
}

std::vector<Hypothesis> solve_relation(std::span<const Panel> ctx, double delta) {
  WordIndex wi;
  std::vector<RelationSet> cand;
  for (const auto& p : ctx) {
    auto u = parse_relation_utterance(p.utterance);
    if (!u) malformed(Task::relation, "expected '<color> <shape> w <color> <shape>'");
    auto a = resolve_phrase(p.scene, u->color_a, u->shape_a);
    auto b = resolve_phrase(p.scene, u->color_b, u->shape_b);
    if (!a || !b || *a == *b) malformed(Task::relation, "referring phrase does not resolve");
    std::size_t i = wi.add(u->word);
    if (i == cand.size()) cand.push_back(RelationSet::full());
    cand[i] = cand[i] & relations_between(*a, *b, p.scene, delta);
  }
  std::vector<std::vector<Concept>> lists;
  for (auto s : cand) lists.push_back(to_concepts(s));
  return enumerate(wi.words, lists, false, nullptr);
}

std::vector<Hypothesis> solve_bootstrap(std::span<const Panel> ctx, double delta) {
  WordIndex wi;
  std::vector<std::vector<std::size_t>> occurs;
  std::vector<BootstrapUtterance> parsed;
  std::set<ObjectType> observed;
  for (std::size_t c = 0; c < ctx.size(); ++c) {
    auto u = parse_bootstrap_utterance(ctx[c].utterance);
    if (!u) malformed(Task::bootstrap, "expected 'w <relation> w'");
    parsed.push_back(*u);
    for (const auto& w : {u->word_a, u->word_b}) {
      std::size_t i = wi.add(w);
      if (i == occurs.size()) occurs.emplace_back();
      occurs[i].push_back(c);
    }
    for (const auto& o : ctx[c].scene.objects) observed.insert(o.type);
  }
  std::vector<std::vector<Concept>> lists;
  for (const auto& occ : occurs) {
    std::vector<Concept> l;
    for (const auto& t : observed) {
      bool everywhere = std::all_of(occ.begin(), occ.end(),
                                    [&](std::size_t c) { return scene_has_type(ctx[c].scene, t); });
      if (everywhere) l.emplace_back(t);
    }
    lists.push_back(std::move(l));
  }
  FinalCheck check = [&](const std::vector<std::string>& words, const Assignment& a) {
    std::map<std::string, ObjectType> m;
    for (std::size_t i = 0; i < words.size(); ++i) m[words[i]] = std::get<ObjectType>(a[i]);
    for (std::size_t c = 0; c < ctx.size(); ++c) {
      const auto& u = parsed[c];
      if (!has_related_pair(ctx[c].scene, m.at(u.word_a), u.relation, m.at(u.word_b), delta)) {
        return false;
      }
    }
    return true;
  };
  return enumerate(wi.words, lists, true, check);
}

}  // namespace

const Concept* Hypothesis::find(std::string_view word) const {
  auto it = std::lower_bound(bindings.begin(), bindings.end(), word,
                             [](const auto& b, std::string_view w) { return b.first < w; });
  if (it == bindings.end() || it->first != word) return nullptr;
  return &it->second;
}

int SolveResult::supported_count() const {
  return static_cast<int>(std::count(per_option_support.begin(), per_option_support.end(), true));
}

std::vector<Hypothesis> consistent_lexicons(Task task, std::span<const Panel> contexts,
                                            double delta) {
  std::vector<Hypothesis> out;
  switch (task) {
    case Task::shape:
    case Task::color:
    case Task::material: out = solve_attribute(task, contexts); break;
    case Task::object: out = solve_object(contexts); break;
    case Task::composite: out = solve_composite(contexts); break;
    case Task::relation: out = solve_relation(contexts, delta); break;
    case Task::bootstrap: out = solve_bootstrap(contexts, delta); break;
    case Task::number: out = solve_number(contexts); break;
    case Task::pragmatic: out = solve_pragmatic(contexts); break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool option_holds(Task task, const Hypothesis& h, const Scene& query, const Utterance& option,
                  double delta) {
  const auto& t = option.tokens;
  switch (task) {
    case Task::shape:
    case Task::color:
    case Task::material: {
      if (t.size() != 1 || query.objects.size() != 1) return false;
      const Concept* c = h.find(t[0]);
      const auto* v = c ? std::get_if<AttributeValue>(c) : nullptr;
      return v && query.objects[0].type.has(*v);
    }
    case Task::number: {
      if (t.size() != 1) return false;
      const Concept* c = h.find(t[0]);
      const auto* n = c ? std::get_if<Count>(c) : nullptr;
      return n && n->value == count_objects(query);
    }
    case Task::pragmatic: {
      if (t.size() != 1 || !query.pointed) return false;
      const Concept* c = h.find(t[0]);
      const auto* v = c ? std::get_if<AttributeValue>(c) : nullptr;
      return v && unique_attributes(query, *query.pointed).contains(*v);
    }
    case Task::object: {
      auto words = conjunct_words(option);
      if (words.empty()) return false;
      std::set<ObjectType> named;
      for (const auto& w : words) {
        const Concept* c = h.find(w);
        const auto* o = c ? std::get_if<ObjectType>(c) : nullptr;
        if (!o) return false;
        named.insert(*o);
      }
      return named.size() == words.size() && named == type_set(query);
    }
    case Task::composite: {
      if (t.size() != 2 || h.syntax.size() != 2 || query.objects.size() != 1) return false;
      for (std::size_t pos = 0; pos < 2; ++pos) {
        const Concept* c = h.find(t[pos]);
        const auto* v = c ? std::get_if<AttributeValue>(c) : nullptr;
        if (!v || v->kind() != h.syntax[pos] || !query.objects[0].type.has(*v)) return false;
      }
      return true;
    }
    case Task::relation: {
      auto u = parse_relation_utterance(option);
      if (!u) return false;
      const Concept* c = h.find(u->word);
      const auto* r = c ? std::get_if<Relation>(c) : nullptr;
      if (!r) return false;
      auto a = resolve_phrase(query, u->color_a, u->shape_a);
      auto b = resolve_phrase(query, u->color_b, u->shape_b);
      if (!a || !b || *a == *b) return false;
      return relations_between(*a, *b, query, delta).contains(*r);
    }
    case Task::bootstrap: {
      auto u = parse_bootstrap_utterance(option);
      if (!u) return false;
      const Concept* ca = h.find(u->word_a);
      const Concept* cb = h.find(u->word_b);
      const auto* a = ca ? std::get_if<ObjectType>(ca) : nullptr;
      const auto* b = cb ? std::get_if<ObjectType>(cb) : nullptr;
      return a && b && has_related_pair(query, *a, u->relation, *b, delta);
    }
  }
  return false;
}

double episode_delta(const Episode& episode) {
  auto it = episode.metadata.find("delta");
  if (it == episode.metadata.end()) return Geometry{}.delta;
  return std::stod(it->second);
}

SolveResult evaluate_support(const Episode& episode, int k) {
  if (k < 1 || k > static_cast<int>(episode.contexts.size())) {
    throw PreconditionError("context count k out of range");
  }
  const double delta = episode_delta(episode);
  std::span<const Panel> ctx(episode.contexts.data(), static_cast<std::size_t>(k));
  auto hyps = consistent_lexicons(episode.task, ctx, delta);
  SolveResult r;
  r.surviving_lexicons = hyps.size();
  const std::size_t n = std::min<std::size_t>(episode.options.size(), kOptionCount);
  for (std::size_t i = 0; i < n; ++i) {
    r.per_option_support[i] = std::any_of(hyps.begin(), hyps.end(), [&](const Hypothesis& h) {
      return option_holds(episode.task, h, episode.query, episode.options[i], delta);
    });
  }
  r.chosen_index = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (r.per_option_support[i]) {
      r.chosen_index = static_cast<int>(i);
      break;
    }
  }
  return r;
}

SolveResult answer(const Episode& episode) {
  episode.validate_structure();
  SolveResult r = evaluate_support(episode, static_cast<int>(episode.contexts.size()));
  if (r.supported_count() != 1) throw AmbiguousEpisode(episode.episode_id, r.supported_count());
  return r;
}

SolveResult solve_ablated(const Episode& episode, int k) {
  if (k < 1 || k > kContextCount) throw PreconditionError("solve_ablated needs 1 <= k <= 6");
  return evaluate_support(episode, k);
}

}  // namespace mewl
