#include "mewl/taskgen.hpp"

#include <mutex>
#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "mewl/layout.hpp"
#include "mewl/solver.hpp"

namespace mewl {

// ---------------------------------------------------------------------------
// Config

std::string_view split_name(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  return "";
}

std::optional<Split> parse_split(std::string_view name) {
  for (Split s : kSplits) {
    if (split_name(s) == name) return s;
  }
  return std::nullopt;
}

int SplitCounts::of(Split split) const {
  switch (split) {
    case Split::train: return train;
    case Split::val: return val;
    case Split::test: return test;
  }
  return 0;
}

int& SplitCounts::of(Split split) {
  switch (split) {
    case Split::train: return train;
    case Split::val: return val;
    case Split::test: break;
  }
  return test;
}

std::map<Task, SplitCounts> GenConfig::default_counts() {
  std::map<Task, SplitCounts> out;
  for (Task t : kTasks) out[t] = SplitCounts{};
  return out;
}

namespace {

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  if constexpr (std::is_floating_point_v<T>) {
    try {
      std::size_t used = 0;
      out = static_cast<T>(std::stod(value, &used));
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw PreconditionError("config key '" + key + "': not a number: " + value);
    }
  } else {
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
      throw PreconditionError("config key '" + key + "': not an integer: " + value);
    }
  }
  return out;
}

}  // namespace

GenConfig GenConfig::parse(std::string_view text) {
  GenConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw PreconditionError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "global_seed") {
      cfg.global_seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "delta") {
      cfg.geometry.delta = parse_number<double>(key, value);
    } else if (key == "d_min") {
      cfg.geometry.d_min = parse_number<double>(key, value);
    } else if (key == "arena") {
      cfg.geometry.arena = parse_number<double>(key, value);
    } else if (key == "max_regen_attempts") {
      cfg.max_regen_attempts = parse_number<int>(key, value);
    } else if (auto split = parse_split(key)) {
      int n = parse_number<int>(key, value);
      for (auto& [task, c] : cfg.counts) c.of(*split) = n;
    } else if (auto dot = key.find('.'); dot != std::string::npos) {
      auto task = parse_task(key.substr(0, dot));
      auto split = parse_split(key.substr(dot + 1));
      if (!task || !split) throw PreconditionError("unknown config key '" + key + "'");
      cfg.counts[*task].of(*split) = parse_number<int>(key, value);
    } else {
      throw PreconditionError("unknown config key '" + key + "'");
    }
  }
  if (cfg.max_regen_attempts < 1) throw PreconditionError("max_regen_attempts must be positive");
  return cfg;
}

GenConfig GenConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

int GenConfig::count(Task task, Split split) const {
  auto it = counts.find(task);
  return it == counts.end() ? 0 : it->second.of(split);
}

int GenConfig::total(Split split) const {
  int n = 0;
  for (const auto& [task, c] : counts) n += c.of(split);
  return n;
}

// ---------------------------------------------------------------------------
// Certification

CertReport certify(const Episode& episode) {
  episode.validate_structure();
  SolveResult r = evaluate_support(episode, static_cast<int>(episode.contexts.size()));
  CertReport report;
  report.supported_option_count = r.supported_count();
  report.surviving_lexicon_count = r.surviving_lexicons;
  report.answer_supported = r.per_option_support[static_cast<std::size_t>(episode.answer_index)];
  return report;
}

// ---------------------------------------------------------------------------
// Generators

namespace {

ObjectType random_type(Rng& rng) {
  return ObjectType::from_code(static_cast<int>(rng.below(kObjectTypeCount)));
}

ObjectType random_type_with(Rng& rng, AttributeValue v) { return random_type(rng).with(v); }

Scene make_scene(const std::vector<ObjectType>& types, const std::vector<Point>& positions,
                 std::optional<int> pointed = std::nullopt) {
  Scene s;
  for (std::size_t i = 0; i < types.size(); ++i) {
    s.objects.push_back({static_cast<int>(i), types[i], positions[i]});
  }
  s.pointed = pointed;
  return s;
}

Scene scatter(const std::vector<ObjectType>& types, const GenOptions& opt, Rng& rng,
              std::optional<int> pointed = std::nullopt) {
  auto pos = sample_layout(static_cast<int>(types.size()), {}, opt.geometry, rng);
  return make_scene(types, pos, pointed);
}

// Three objects separated on both axes pairwise, so every pair has exactly
// one relation per axis and relation captions always apply.
Scene scatter_separated(const std::vector<ObjectType>& types,
                        std::vector<LayoutConstraint> extra, const GenOptions& opt, Rng& rng) {
  std::vector<LayoutConstraint> cs = {LayoutConstraint::separated(0, 1),
                                      LayoutConstraint::separated(0, 2),
                                      LayoutConstraint::separated(1, 2)};
  cs.insert(cs.end(), extra.begin(), extra.end());
  auto pos = sample_layout(static_cast<int>(types.size()), cs, opt.geometry, rng);
  return make_scene(types, pos);
}

std::vector<Word> words_for(Task task, int n, const GenOptions& opt, Rng& rng,
                            std::span<const Word> exclude = {}) {
  WordPolicy policy;
  policy.syllable_count = syllables_for(task);
  return sample_words(n, policy, rng, *opt.inventory, exclude);
}

Utterance single(const Word& w) { return Utterance{{w.text}}; }

// Shuffles options and returns the truth's new index.
int shuffle_options(std::vector<Utterance>& options, Rng& rng) {
  Utterance truth = options.front();
  rng.shuffle(options);
  return static_cast<int>(std::find(options.begin(), options.end(), truth) - options.begin());
}

Episode skeleton(Task task, const Lexicon& lexicon, const GenOptions& opt) {
  Episode ep;
  ep.task = task;
  ep.lexicon = lexicon;
  if (opt.geometry.delta != Geometry{}.delta) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", opt.geometry.delta);
    ep.metadata["delta"] = buf;
  }
  return ep;
}

// Rejection loop shared by every generator.
std::pair<Episode, CertReport> rejection_loop(
    Task task, const GenOptions& opt, const std::function<std::optional<Episode>()>& build,
    bool require_unique_lexicon) {
  for (int attempt = 1; attempt <= opt.max_regen_attempts; ++attempt) {
    std::optional<Episode> ep;
    try {
      ep = build();
    } catch (const LayoutExhausted&) {
      continue;
    }
    if (!ep) continue;
    CertReport r = certify(*ep);
    if (!r.accepted()) continue;
    if (require_unique_lexicon && r.surviving_lexicon_count != 1) continue;
    r.attempts_used = attempt;
    return {std::move(*ep), r};
  }
  throw GenerationExhausted(std::string(task_name(task)) + ": no certified episode after " +
                            std::to_string(opt.max_regen_attempts) + " attempts");
}

std::pair<Episode, CertReport> attribute_impl(AttributeKind kind, Rng& rng, const GenOptions& opt) {
  Task task = kind == AttributeKind::shape  ? Task::shape
              : kind == AttributeKind::color ? Task::color
              : kind == AttributeKind::material
                  ? Task::material
                  : throw PreconditionError("attribute episodes name shape, color or material");

  auto all = AttributeValue::all_of(kind);
  std::vector<AttributeValue> values;
  for (int i : rng.sample_indices(static_cast<int>(all.size()), 3)) {
    values.push_back(all[static_cast<std::size_t>(i)]);
  }
  auto words = words_for(task, 3, opt, rng);
  auto dummies = words_for(task, 2, opt, rng, words);
  Lexicon lex;
  for (int i = 0; i < 3; ++i) lex.add(words[static_cast<std::size_t>(i)], values[static_cast<std::size_t>(i)]);

  auto build = [&]() -> std::optional<Episode> {
    Episode ep = skeleton(task, lex, opt);
    std::vector<int> order = {0, 0, 1, 1, 2, 2};
    rng.shuffle(order);
    // Each word's two objects share nothing but the named value.
    std::vector<std::vector<ObjectType>> objects(3);
    for (int w = 0; w < 3; ++w) {
      AttributeValue v = values[static_cast<std::size_t>(w)];
      ObjectType first = random_type_with(rng, v);
      ObjectType second = random_type_with(rng, v);
      for (int t = 0; t < 100 && (first.attributes() & second.attributes()).size() != 1; ++t) {
        second = random_type_with(rng, v);
      }
      objects[static_cast<std::size_t>(w)] = {first, second};
    }
    std::array<int, 3> used{};
    for (int w : order) {
      ObjectType t = objects[static_cast<std::size_t>(w)][static_cast<std::size_t>(used[static_cast<std::size_t>(w)]++)];
      ep.contexts.push_back({scatter({t}, opt, rng), single(words[static_cast<std::size_t>(w)])});
    }
    int q = static_cast<int>(rng.below(3));
    ep.query = scatter({random_type_with(rng, values[static_cast<std::size_t>(q)])}, opt, rng);
    ep.options = {single(words[static_cast<std::size_t>(q)])};
    for (int w = 0; w < 3; ++w) {
      if (w != q) ep.options.push_back(single(words[static_cast<std::size_t>(w)]));
    }
    for (const auto& d : dummies) ep.options.push_back(single(d));
    ep.answer_index = shuffle_options(ep.options, rng);
    return ep;
  };
  return rejection_loop(task, opt, build, true);
}

std::pair<Episode, CertReport> object_impl(Rng& rng, const GenOptions& opt) {
  std::vector<ObjectType> types;
  for (int c : rng.sample_indices(kObjectTypeCount, 6)) types.push_back(ObjectType::from_code(c));
  auto words = words_for(Task::object, 6, opt, rng);
  Lexicon lex;
  for (std::size_t i = 0; i < 6; ++i) lex.add(words[i], types[i]);

  std::vector<std::array<int, 3>> triples;
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b)
      for (int c = b + 1; c < 6; ++c) triples.push_back({a, b, c});

  auto scene_for = [&](const std::array<int, 3>& tri) {
    std::vector<int> objs(tri.begin(), tri.end());
    rng.shuffle(objs);
    std::vector<ObjectType> ts;
    for (int i : objs) ts.push_back(types[static_cast<std::size_t>(i)]);
    return scatter(ts, opt, rng);
  };
  // Word order is shuffled independently of the scene's object order.
  auto utterance_for = [&](const std::array<int, 3>& tri) {
    std::vector<int> objs(tri.begin(), tri.end());
    rng.shuffle(objs);
    Utterance u;
    for (std::size_t i = 0; i < objs.size(); ++i) {
      if (i > 0) u.tokens.push_back("and");
      u.tokens.push_back(words[static_cast<std::size_t>(objs[i])].text);
    }
    return u;
  };

  auto build = [&]() -> std::optional<Episode> {
    auto pick = rng.sample_indices(static_cast<int>(triples.size()), 7);
    // Every object must occur, and no two objects may occur in exactly the
    // same contexts.
    std::array<unsigned, 6> membership{};
    for (int c = 0; c < 6; ++c) {
      for (int o : triples[static_cast<std::size_t>(pick[static_cast<std::size_t>(c)])]) {
        membership[static_cast<std::size_t>(o)] |= 1U << c;
      }
    }
    std::set<unsigned> distinct(membership.begin(), membership.end());
    if (distinct.size() != 6 || distinct.contains(0U)) return std::nullopt;

    Episode ep = skeleton(Task::object, lex, opt);
    for (int c = 0; c < 6; ++c) {
      const auto& tri = triples[static_cast<std::size_t>(pick[static_cast<std::size_t>(c)])];
      ep.contexts.push_back({scene_for(tri), utterance_for(tri)});
    }
    const auto& query_tri = triples[static_cast<std::size_t>(pick[6])];
    ep.query = scene_for(query_tri);
    ep.options = {utterance_for(query_tri)};

    std::vector<int> rest;
    for (int i = 0; i < static_cast<int>(triples.size()); ++i) {
      if (std::find(pick.begin(), pick.end(), i) == pick.end()) rest.push_back(i);
    }
    rng.shuffle(rest);
    for (int i = 0; i < 4; ++i) {
      ep.options.push_back(utterance_for(triples[static_cast<std::size_t>(rest[static_cast<std::size_t>(i)])]));
    }
    ep.answer_index = shuffle_options(ep.options, rng);
    return ep;
  };
  return rejection_loop(Task::object, opt, build, true);
}

std::pair<Episode, CertReport> composite_impl(Rng& rng, const GenOptions& opt) {
  auto kind_pick = rng.sample_indices(3, 2);
  const std::array<AttributeKind, 2> syntax = {kNameableKinds[static_cast<std::size_t>(kind_pick[0])],
                                               kNameableKinds[static_cast<std::size_t>(kind_pick[1])]};
  std::array<std::vector<AttributeValue>, 2> values;
  for (std::size_t k = 0; k < 2; ++k) {
    auto all = AttributeValue::all_of(syntax[k]);
    for (int i : rng.sample_indices(static_cast<int>(all.size()), 3)) {
      values[k].push_back(all[static_cast<std::size_t>(i)]);
    }
  }
  auto words = words_for(Task::composite, 6, opt, rng);
  Lexicon lex;
  for (std::size_t i = 0; i < 6; ++i) lex.add(words[i], values[i / 3][i % 3]);
  auto word_of = [&](std::size_t position, int value) -> const Word& {
    return words[position * 3 + static_cast<std::size_t>(value)];
  };

  auto object_for = [&](int i, int j) {
    return random_type(rng).with(values[0][static_cast<std::size_t>(i)]).with(values[1][static_cast<std::size_t>(j)]);
  };
  auto phrase = [&](int i, int j) {
    return Utterance{{word_of(0, i).text, word_of(1, j).text}};
  };

  auto build = [&]() -> std::optional<Episode> {
    // Seven distinct value pairs out of nine: six contexts and the query.
    auto pick = rng.sample_indices(9, 7);
    std::set<int> seen_first, seen_second;
    for (int c = 0; c < 6; ++c) {
      seen_first.insert(pick[static_cast<std::size_t>(c)] / 3);
      seen_second.insert(pick[static_cast<std::size_t>(c)] % 3);
    }
    if (seen_first.size() != 3 || seen_second.size() != 3) return std::nullopt;

    Episode ep = skeleton(Task::composite, lex, opt);
    ep.metadata["syntax"] = std::string(kind_name(syntax[0])) + "," + std::string(kind_name(syntax[1]));
    for (int c = 0; c < 6; ++c) {
      int p = pick[static_cast<std::size_t>(c)];
      ep.contexts.push_back({scatter({object_for(p / 3, p % 3)}, opt, rng), phrase(p / 3, p % 3)});
    }
    int q = pick[6];
    ep.query = scatter({object_for(q / 3, q % 3)}, opt, rng);
    ep.options = {phrase(q / 3, q % 3)};
    // Syntax-respecting phrases whose value pairs never appeared.
    for (int p = 0; p < 9; ++p) {
      if (std::find(pick.begin(), pick.end(), p) == pick.end()) ep.options.push_back(phrase(p / 3, p % 3));
    }
    // Fill with other two-word phrases over the episode's words.
    std::vector<Utterance> others;
    for (std::size_t a = 0; a < 6; ++a) {
      for (std::size_t b = 0; b < 6; ++b) {
        if (a == b || (a < 3 && b >= 3)) continue;
        others.push_back(Utterance{{words[a].text, words[b].text}});
      }
    }
    rng.shuffle(others);
    for (std::size_t i = 0; ep.options.size() < kOptionCount; ++i) ep.options.push_back(others[i]);
    ep.answer_index = shuffle_options(ep.options, rng);
    return ep;
  };
  return rejection_loop(Task::composite, opt, build, true);
}

// Three object types with pairwise distinct (color, shape).
std::vector<ObjectType> distinct_phrase_types(Rng& rng) {
  for (;;) {
    std::vector<ObjectType> ts = {random_type(rng), random_type(rng), random_type(rng)};
    auto key = [](const ObjectType& t) {
      return t.index(AttributeKind::color) * 3 + t.index(AttributeKind::shape);
    };
    if (key(ts[0]) != key(ts[1]) && key(ts[0]) != key(ts[2]) && key(ts[1]) != key(ts[2])) return ts;
  }
}

Relation random_on_other_axis(Relation r, Rng& rng) {
  bool horizontal = r == Relation::left || r == Relation::right;
  if (horizontal) return rng.coin() ? Relation::front : Relation::behind;
  return rng.coin() ? Relation::left : Relation::right;
}

std::pair<Episode, CertReport> relation_impl(Rng& rng, const GenOptions& opt) {
  std::vector<Relation> rels;
  for (int i : rng.sample_indices(4, 3)) rels.push_back(kRelations[static_cast<std::size_t>(i)]);
  auto words = words_for(Task::relation, 3, opt, rng);
  auto dummies = words_for(Task::relation, 2, opt, rng, words);
  Lexicon lex;
  for (std::size_t i = 0; i < 3; ++i) lex.add(words[i], rels[i]);

  struct Built {
    Scene scene;
    std::vector<std::string> phrase_a, phrase_b;
  };
  // Referents are objects 0 and 1 of the scene; a is the relation's subject.
  auto build_scene = [&](Relation r, Relation other) {
    auto types = distinct_phrase_types(rng);
    int a = rng.coin() ? 0 : 1;
    int b = 1 - a;
    Scene s = scatter_separated(types, {LayoutConstraint::holds(a, b, r), LayoutConstraint::holds(a, b, other)},
                                opt, rng);
    auto [ca, sa] = referring_phrase(s, a);
    auto [cb, sb] = referring_phrase(s, b);
    return Built{std::move(s), {ca, sa}, {cb, sb}};
  };
  auto utter = [](const std::vector<std::string>& pa, const std::string& w,
                  const std::vector<std::string>& pb) {
    return Utterance{{pa[0], pa[1], w, pb[0], pb[1]}};
  };

  auto build = [&]() -> std::optional<Episode> {
    Episode ep = skeleton(Task::relation, lex, opt);
    ep.metadata["option_style"] = "utterance";
    std::vector<int> order = {0, 0, 1, 1, 2, 2};
    rng.shuffle(order);
    // The two occurrences of a word pair its relation with opposite
    // directions on the other axis, so only the true relation survives both.
    std::array<Relation, 3> first_other{};
    std::array<bool, 3> seen{};
    for (int w : order) {
      auto wi = static_cast<std::size_t>(w);
      Relation other;
      if (!seen[wi]) {
        other = random_on_other_axis(rels[wi], rng);
        first_other[wi] = other;
        seen[wi] = true;
      } else {
        other = inverse(first_other[wi]);
      }
      auto built = build_scene(rels[wi], other);
      ep.contexts.push_back({std::move(built.scene), utter(built.phrase_a, words[wi].text, built.phrase_b)});
    }

    auto q = static_cast<std::size_t>(rng.below(3));
    auto built = build_scene(rels[q], random_on_other_axis(rels[q], rng));
    ep.query = built.scene;
    ep.options = {utter(built.phrase_a, words[q].text, built.phrase_b)};

    // Episode words in orientations that are false for the query.
    std::vector<Utterance> pool;
    for (std::size_t w = 0; w < 3; ++w) {
      for (bool swap : {false, true}) {
        const auto& pa = swap ? built.phrase_b : built.phrase_a;
        const auto& pb = swap ? built.phrase_a : built.phrase_b;
        auto a = *resolve_phrase(ep.query, pa[0], pa[1]);
        auto b = *resolve_phrase(ep.query, pb[0], pb[1]);
        if (!relations_between(a, b, ep.query, opt.geometry.delta).contains(rels[w])) {
          pool.push_back(utter(pa, words[w].text, pb));
        }
      }
    }
    rng.shuffle(pool);
    int dummy_count = rng.uniform_int(1, 2);
    for (std::size_t i = 0; i < pool.size() && ep.options.size() < static_cast<std::size_t>(kOptionCount - dummy_count); ++i) {
      ep.options.push_back(pool[i]);
    }
    for (std::size_t d = 0; ep.options.size() < kOptionCount; ++d) {
      ep.options.push_back(utter(built.phrase_a, dummies[d].text, built.phrase_b));
    }
    ep.answer_index = shuffle_options(ep.options, rng);
    return ep;
  };
  return rejection_loop(Task::relation, opt, build, true);
}

std::pair<Episode, CertReport> bootstrap_impl(Rng& rng, const GenOptions& opt) {
  std::vector<ObjectType> types;
  for (int c : rng.sample_indices(kObjectTypeCount, 6)) types.push_back(ObjectType::from_code(c));
  auto words = words_for(Task::bootstrap, 6, opt, rng);
  Lexicon lex;
  for (std::size_t i = 0; i < 6; ++i) lex.add(words[i], types[i]);

  // Lays out the given lexicon objects in shuffled scene order; returns the
  // scene and the scene id of each lexicon index.
  auto place = [&](std::vector<int> objs) {
    rng.shuffle(objs);
    std::vector<ObjectType> ts;
    for (int i : objs) ts.push_back(types[static_cast<std::size_t>(i)]);
    Scene s = scatter_separated(ts, {}, opt, rng);
    std::map<int, int> id_of;
    for (std::size_t k = 0; k < objs.size(); ++k) id_of[objs[k]] = static_cast<int>(k);
    return std::make_pair(std::move(s), id_of);
  };
  auto utter = [&](int a, Relation r, int b) {
    return Utterance{{words[static_cast<std::size_t>(a)].text, std::string(relation_name(r)),
                      words[static_cast<std::size_t>(b)].text}};
  };

  auto build = [&]() -> std::optional<Episode> {
    // Each word is a referent exactly twice across the six contexts.
    std::vector<int> slots = {0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5};
    rng.shuffle(slots);
    std::set<std::pair<int, int>> pairs;
    for (std::size_t c = 0; c < 6; ++c) {
      int a = slots[2 * c], b = slots[2 * c + 1];
      if (a == b || !pairs.insert({std::min(a, b), std::max(a, b)}).second) return std::nullopt;
    }

    Episode ep = skeleton(Task::bootstrap, lex, opt);
    std::set<std::vector<ObjectType>> scene_keys;
    for (std::size_t c = 0; c < 6; ++c) {
      int a = slots[2 * c], b = slots[2 * c + 1];
      std::vector<int> others;
      for (int o = 0; o < 6; ++o) {
        if (o != a && o != b) others.push_back(o);
      }
      int distractor = rng.pick(others);
      auto [scene, id_of] = place({a, b, distractor});
      auto rel = rng.pick(relations_between(id_of[a], id_of[b], scene, opt.geometry.delta).values());
      scene_keys.insert(scene.type_key());
      ep.contexts.push_back({std::move(scene), utter(a, rel, b)});
    }

    auto query_objs = rng.sample_indices(6, 3);
    auto [query, qid] = place(query_objs);
    int x = query_objs[0], y = query_objs[1];
    auto rel = rng.pick(relations_between(qid[x], qid[y], query, opt.geometry.delta).values());
    ep.query = std::move(query);
    ep.options = {utter(x, rel, y)};

    std::vector<Utterance> pool;
    for (int a = 0; a < 6; ++a) {
      for (int b = 0; b < 6; ++b) {
        if (a == b) continue;
        bool present = qid.contains(a) && qid.contains(b);
        for (Relation r : kRelations) {
          if (present && relations_between(qid[a], qid[b], ep.query, opt.geometry.delta).contains(r)) continue;
          pool.push_back(utter(a, r, b));
        }
      }
    }
    rng.shuffle(pool);
    for (std::size_t i = 0; i < 4; ++i) ep.options.push_back(pool[i]);
    ep.answer_index = shuffle_options(ep.options, rng);
    return ep;
  };
  return rejection_loop(Task::bootstrap, opt, build, true);
}

std::pair<Episode, CertReport> number_impl(Rng& rng, const GenOptions& opt) {
  auto words = words_for(Task::number, 6, opt, rng);
  Lexicon lex;
  for (int i = 0; i < 6; ++i) lex.add(words[static_cast<std::size_t>(i)], Count{i + 1});

  auto scene_of = [&](int n) {
    std::vector<ObjectType> ts;
    for (int i = 0; i < n; ++i) ts.push_back(random_type(rng));
    return scatter(ts, opt, rng);
  };

  auto build = [&]() -> std::optional<Episode> {
    Episode ep = skeleton(Task::number, lex, opt);
    std::vector<int> counts = {1, 2, 3, 4, 5, 6};
    rng.shuffle(counts);
    for (int n : counts) ep.contexts.push_back({scene_of(n), single(words[static_cast<std::size_t>(n - 1)])});
    int q = rng.uniform_int(1, 6);
    ep.query = scene_of(q);
    ep.options = {single(words[static_cast<std::size_t>(q - 1)])};
    std::vector<int> others;
    for (int n = 1; n <= 6; ++n) {
      if (n != q) others.push_back(n);
    }
    rng.shuffle(others);
    for (int i = 0; i < 4; ++i) ep.options.push_back(single(words[static_cast<std::size_t>(others[static_cast<std::size_t>(i)] - 1)]));
    ep.answer_index = shuffle_options(ep.options, rng);
    return ep;
  };
  return rejection_loop(Task::number, opt, build, true);
}

std::pair<Episode, CertReport> pragmatic_impl(Rng& rng, const GenOptions& opt) {
  std::vector<AttributeValue> values;
  for (int c : rng.sample_indices(kAttributeValueCount, 6)) values.push_back(AttributeValue::from_code(c));
  auto words = words_for(Task::pragmatic, 6, opt, rng);
  Lexicon lex;
  for (std::size_t i = 0; i < 6; ++i) lex.add(words[i], values[i]);

  // Base object, the referent (base with the target value) and a third object
  // (base with a different kind changed).
  auto scene_for = [&](AttributeValue target) {
    ObjectType base = random_type(rng);
    while (base.has(target)) base = random_type(rng);
    ObjectType referent = base.with(target);
    std::vector<AttributeKind> other_kinds;
    for (AttributeKind k : kAttributeKinds) {
      if (k != target.kind()) other_kinds.push_back(k);
    }
    AttributeKind changed = rng.pick(other_kinds);
    std::vector<AttributeValue> alternatives;
    for (auto v : AttributeValue::all_of(changed)) {
      if (!base.has(v)) alternatives.push_back(v);
    }
    ObjectType third = base.with(rng.pick(alternatives));

    std::vector<ObjectType> ts = {base, referent, third};
    std::vector<int> order = {0, 1, 2};
    rng.shuffle(order);
    std::vector<ObjectType> shuffled;
    int pointed = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      shuffled.push_back(ts[static_cast<std::size_t>(order[k])]);
      if (order[k] == 1) pointed = static_cast<int>(k);
    }
    return scatter(shuffled, opt, rng, pointed);
  };

  auto build = [&]() -> std::optional<Episode> {
    Episode ep = skeleton(Task::pragmatic, lex, opt);
    std::vector<int> order = {0, 1, 2, 3, 4, 5};
    rng.shuffle(order);
    for (int i : order) {
      auto v = values[static_cast<std::size_t>(i)];
      Scene s = scene_for(v);
      AttributeSet expected;
      expected.insert(v);
      if (unique_attributes(s, *s.pointed) != expected) return std::nullopt;
      ep.contexts.push_back({std::move(s), single(words[static_cast<std::size_t>(i)])});
    }
    auto q = static_cast<std::size_t>(rng.below(6));
    ep.query = scene_for(values[q]);
    ep.options = {single(words[q])};
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < 6; ++i) {
      if (i != q) others.push_back(i);
    }
    rng.shuffle(others);
    for (std::size_t i = 0; i < 4; ++i) ep.options.push_back(single(words[others[i]]));
    ep.answer_index = shuffle_options(ep.options, rng);
    return ep;
  };
  return rejection_loop(Task::pragmatic, opt, build, true);
}

}  // namespace

Episode gen_attribute_episode(AttributeKind kind, Rng& rng, const GenOptions& options) {
  return attribute_impl(kind, rng, options).first;
}
Episode gen_object_episode(Rng& rng, const GenOptions& options) {
  return object_impl(rng, options).first;
}
Episode gen_composite_episode(Rng& rng, const GenOptions& options) {
  return composite_impl(rng, options).first;
}
Episode gen_relation_episode(Rng& rng, const GenOptions& options) {
  return relation_impl(rng, options).first;
}
Episode gen_bootstrap_episode(Rng& rng, const GenOptions& options) {
  return bootstrap_impl(rng, options).first;
}
Episode gen_number_episode(Rng& rng, const GenOptions& options) {
  return number_impl(rng, options).first;
}
Episode gen_pragmatic_episode(Rng& rng, const GenOptions& options) {
  return pragmatic_impl(rng, options).first;
}

std::pair<Episode, CertReport> generate_certified(Task task, Rng& rng, const GenOptions& options) {
  switch (task) {
    case Task::shape:
    case Task::color:
    case Task::material: return attribute_impl(attribute_task_kind(task), rng, options);
    case Task::object: return object_impl(rng, options);
    case Task::composite: return composite_impl(rng, options);
    case Task::relation: return relation_impl(rng, options);
    case Task::bootstrap: return bootstrap_impl(rng, options);
    case Task::number: return number_impl(rng, options);
    case Task::pragmatic: return pragmatic_impl(rng, options);
  }
  throw PreconditionError("unknown task");
}

Episode gen_attention_check(const Episode& episode, Rng& rng) {
  episode.validate_structure();
  std::vector<int> sources = {0, 1, 2, 3, 4, 5};
  rng.shuffle(sources);
  for (int source : sources) {
    const Panel& panel = episode.contexts[static_cast<std::size_t>(source)];
    Episode ep = episode;
    ep.episode_id = episode.episode_id + "-ac";
    ep.query = panel.scene;
    ep.metadata["attention_check"] = "true";
    ep.metadata["source_context"] = std::to_string(source);

    auto present = std::find(ep.options.begin(), ep.options.end(), panel.utterance);
    if (present != ep.options.end()) {
      ep.answer_index = static_cast<int>(present - ep.options.begin());
      if (certify(ep).accepted()) return ep;
      continue;
    }
    // Replace the previous answer first (it described the old query), then
    // any other slot.
    std::vector<int> slots;
    for (int i = 0; i < kOptionCount; ++i) {
      if (i != episode.answer_index) slots.push_back(i);
    }
    rng.shuffle(slots);
    slots.insert(slots.begin(), episode.answer_index);
    for (int slot : slots) {
      Episode candidate = ep;
      candidate.options[static_cast<std::size_t>(slot)] = panel.utterance;
      candidate.answer_index = slot;
      if (certify(candidate).accepted()) return candidate;
    }
  }
  throw GenerationExhausted("no certifiable attention check for " + episode.episode_id);
}

std::string episode_id(Split split, Task task, int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%05d", index);
  return std::string(split_name(split)) + "-" + std::string(task_name(task)) + "-" + buf;
}

std::uint64_t episode_seed(std::uint64_t global_seed, Split split, Task task, int index) {
  std::string tag = std::string(split_name(split)) + "/" + std::string(task_name(task));
  return mix_seed(global_seed, tag, static_cast<std::uint64_t>(index));
}

Episode generate_episode(const GenConfig& config, Split split, Task task, int index) {
  GenOptions opt;
  opt.geometry = config.geometry;
  opt.max_regen_attempts = config.max_regen_attempts;
  std::uint64_t seed = episode_seed(config.global_seed, split, task, index);
  Rng rng(seed);
  Episode ep = generate_certified(task, rng, opt).first;
  ep.episode_id = episode_id(split, task, index);
  ep.seed = seed;
  return ep;
}

std::vector<Episode> generate_split(const GenConfig& config, Split split,
                                    const std::vector<Task>& tasks, unsigned threads) {
  std::vector<std::pair<Task, int>> jobs;
  for (Task t : kTasks) {
    if (std::find(tasks.begin(), tasks.end(), t) == tasks.end()) continue;
    for (int i = 0; i < config.count(t, split); ++i) jobs.emplace_back(t, i);
  }
  std::vector<Episode> out(jobs.size());
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, jobs.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      try {
        out[j] = generate_episode(config, split, jobs[j].first, jobs[j].second);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
        return;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace mewl
