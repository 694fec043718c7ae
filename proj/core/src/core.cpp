#include "mewl/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

namespace mewl {
namespace {

constexpr std::array<std::string_view, 2> kSizeNames = {"small", "large"};
constexpr std::array<std::string_view, 8> kColorNames = {
    "gray", "red", "blue", "green", "brown", "purple", "cyan", "yellow"};
constexpr std::array<std::string_view, 3> kMaterialNames = {"rubber", "metal", "glass"};
constexpr std::array<std::string_view, 3> kShapeNames = {"cube", "sphere", "cylinder"};
constexpr std::array<std::string_view, 4> kKindNames = {"size", "color", "material", "shape"};
constexpr std::array<std::string_view, 4> kRelationNames = {"left", "right", "front", "behind"};

std::span<const std::string_view> names_of(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::size: return kSizeNames;
    case AttributeKind::color: return kColorNames;
    case AttributeKind::material: return kMaterialNames;
    case AttributeKind::shape: return kShapeNames;
  }
  return {};
}

}  // namespace

std::string_view kind_name(AttributeKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<AttributeKind> parse_kind(std::string_view name) {
  for (AttributeKind k : kAttributeKinds) {
    if (kind_name(k) == name) return k;
  }
  return std::nullopt;
}

AttributeValue::AttributeValue(AttributeKind kind, int index) : kind_(kind), index_(index) {
  if (index < 0 || index >= kind_cardinality(kind)) {
    throw PreconditionError("attribute index " + std::to_string(index) + " out of range for " +
                            std::string(kind_name(kind)));
  }
}

AttributeValue AttributeValue::from_code(int code) {
  if (code < 0 || code >= kAttributeValueCount) {
    throw PreconditionError("attribute code out of range: " + std::to_string(code));
  }
  for (AttributeKind k : kAttributeKinds) {
    int offset = kind_offset(k);
    if (code < offset + kind_cardinality(k)) return AttributeValue(k, code - offset);
  }
  return {};
}

std::optional<AttributeValue> AttributeValue::parse(std::string_view name) {
  for (AttributeKind k : kAttributeKinds) {
    auto names = names_of(k);
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return AttributeValue(k, static_cast<int>(i));
    }
  }
  return std::nullopt;
}

std::vector<AttributeValue> AttributeValue::all() {
  std::vector<AttributeValue> out;
  for (int c = 0; c < kAttributeValueCount; ++c) out.push_back(from_code(c));
  return out;
}

std::vector<AttributeValue> AttributeValue::all_of(AttributeKind kind) {
  std::vector<AttributeValue> out;
  for (int i = 0; i < kind_cardinality(kind); ++i) out.emplace_back(kind, i);
  return out;
}

std::string_view AttributeValue::name() const {
  return names_of(kind_)[static_cast<std::size_t>(index_)];
}

int AttributeSet::size() const noexcept { return std::popcount(bits_); }

std::vector<AttributeValue> AttributeSet::values() const {
  std::vector<AttributeValue> out;
  for (int c = 0; c < kAttributeValueCount; ++c) {
    if (bits_ >> c & 1U) out.push_back(AttributeValue::from_code(c));
  }
  return out;
}

ObjectType::ObjectType(int size, int color, int material, int shape) {
  const std::array<int, 4> raw = {size, color, material, shape};
  for (AttributeKind k : kAttributeKinds) {
    int v = raw[static_cast<std::size_t>(k)];
    if (v < 0 || v >= kind_cardinality(k)) {
      throw PreconditionError("object " + std::string(kind_name(k)) + " index out of range");
    }
    values_[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(v);
  }
}

ObjectType ObjectType::from_code(int code) {
  if (code < 0 || code >= kObjectTypeCount) {
    throw PreconditionError("object code out of range: " + std::to_string(code));
  }
  int shape = code % 3;
  code /= 3;
  int material = code % 3;
  code /= 3;
  int color = code % 8;
  int size = code / 8;
  return ObjectType(size, color, material, shape);
}

std::vector<ObjectType> ObjectType::all() {
  std::vector<ObjectType> out;
  out.reserve(kObjectTypeCount);
  for (int c = 0; c < kObjectTypeCount; ++c) out.push_back(from_code(c));
  return out;
}

int ObjectType::code() const noexcept {
  return ((values_[0] * 8 + values_[1]) * 3 + values_[2]) * 3 + values_[3];
}

ObjectType ObjectType::with(AttributeValue v) const {
  ObjectType out = *this;
  out.values_[static_cast<std::size_t>(v.kind())] = static_cast<std::uint8_t>(v.index());
  return out;
}

AttributeSet ObjectType::attributes() const {
  AttributeSet s;
  for (AttributeKind k : kAttributeKinds) s.insert(value(k));
  return s;
}

std::string ObjectType::description() const {
  std::string out;
  for (AttributeKind k : kAttributeKinds) {
    if (!out.empty()) out += ' ';
    out += value(k).name();
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string_view relation_name(Relation r) { return kRelationNames[static_cast<std::size_t>(r)]; }

std::optional<Relation> parse_relation(std::string_view name) {
  for (Relation r : kRelations) {
    if (relation_name(r) == name) return r;
  }
  return std::nullopt;
}

Relation inverse(Relation r) {
  switch (r) {
    case Relation::left: return Relation::right;
    case Relation::right: return Relation::left;
    case Relation::front: return Relation::behind;
    case Relation::behind: return Relation::front;
  }
  return r;
}

bool same_axis(Relation a, Relation b) { return a == b || inverse(a) == b; }

int RelationSet::size() const noexcept { return std::popcount(bits_); }

std::vector<Relation> RelationSet::values() const {
  std::vector<Relation> out;
  for (Relation r : kRelations) {
    if (contains(r)) out.push_back(r);
  }
  return out;
}

RelationSet RelationSet::inverted() const {
  RelationSet out;
  for (Relation r : values()) out.insert(inverse(r));
  return out;
}

// ---------------------------------------------------------------------------

const ObjectSpec& Scene::object(int id) const {
  for (const auto& o : objects) {
    if (o.id == id) return o;
  }
  throw UnknownObjectId(id);
}

std::vector<ObjectType> Scene::type_key() const {
  std::vector<ObjectType> key;
  key.reserve(objects.size());
  for (const auto& o : objects) key.push_back(o.type);
  std::sort(key.begin(), key.end());
  return key;
}

void Scene::validate(const Geometry& geometry) const {
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto& o = objects[i];
    if (o.id != static_cast<int>(i)) throw MalformedScene("object ids must be dense 0..n-1");
    if (o.position.x < 0 || o.position.x > geometry.arena || o.position.y < 0 ||
        o.position.y > geometry.arena) {
      throw MalformedScene("object " + std::to_string(o.id) + " lies outside the arena");
    }
    for (std::size_t j = 0; j < i; ++j) {
      double d = std::hypot(o.position.x - objects[j].position.x,
                            o.position.y - objects[j].position.y);
      if (d < geometry.d_min - 1e-9) {
        throw MalformedScene("objects " + std::to_string(j) + " and " + std::to_string(i) +
                             " are closer than d_min");
      }
    }
  }
  if (pointed && (*pointed < 0 || *pointed >= static_cast<int>(objects.size()))) {
    throw MalformedScene("pointer names a missing object");
  }
}

RelationSet relations_between(Point a, Point b, double delta) {
  // Small epsilon keeps coordinates rounded to 0.01 from flipping at the margin.
  constexpr double eps = 1e-9;
  RelationSet out;
  if (b.x - a.x >= delta - eps) out.insert(Relation::left);
  if (a.x - b.x >= delta - eps) out.insert(Relation::right);
  if (a.y - b.y >= delta - eps) out.insert(Relation::front);
  if (b.y - a.y >= delta - eps) out.insert(Relation::behind);
  return out;
}

RelationSet relations_between(int a, int b, const Scene& scene, double delta) {
  if (a == b) throw PreconditionError("relations_between needs two distinct objects");
  return relations_between(scene.object(a).position, scene.object(b).position, delta);
}

int count_objects(const Scene& scene) { return static_cast<int>(scene.objects.size()); }

AttributeSet unique_attributes(const Scene& scene, int target) {
  const ObjectSpec& t = scene.object(target);
  AttributeSet out;
  for (AttributeKind k : kAttributeKinds) {
    AttributeValue v = t.type.value(k);
    bool shared = std::any_of(scene.objects.begin(), scene.objects.end(), [&](const ObjectSpec& o) {
      return o.id != target && o.type.has(v);
    });
    if (!shared) out.insert(v);
  }
  return out;
}

std::pair<std::string, std::string> referring_phrase(const Scene& scene, int target) {
  const ObjectSpec& t = scene.object(target);
  for (const auto& o : scene.objects) {
    if (o.id != target && o.type.index(AttributeKind::color) == t.type.index(AttributeKind::color) &&
        o.type.index(AttributeKind::shape) == t.type.index(AttributeKind::shape)) {
      throw AmbiguousReferent("another object is also a " +
                              std::string(t.type.value(AttributeKind::color).name()) + " " +
                              std::string(t.type.value(AttributeKind::shape).name()));
    }
  }
  return {std::string(t.type.value(AttributeKind::color).name()),
          std::string(t.type.value(AttributeKind::shape).name())};
}

std::optional<int> resolve_phrase(const Scene& scene, std::string_view color,
                                  std::string_view shape) {
  auto c = AttributeValue::parse(color);
  auto s = AttributeValue::parse(shape);
  if (!c || !s || c->kind() != AttributeKind::color || s->kind() != AttributeKind::shape) {
    return std::nullopt;
  }
  std::optional<int> found;
  for (const auto& o : scene.objects) {
    if (o.type.has(*c) && o.type.has(*s)) {
      if (found) return std::nullopt;
      found = o.id;
    }
  }
  return found;
}

// ---------------------------------------------------------------------------

std::string Utterance::text() const {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

bool is_familiar_token(std::string_view token) {
  return token == "and" || AttributeValue::parse(token).has_value() ||
         parse_relation(token).has_value();
}

std::string concept_to_string(const Concept& c) {
  struct Visitor {
    std::string operator()(const AttributeValue& v) const {
      return std::string(kind_name(v.kind())) + ":" + std::string(v.name());
    }
    std::string operator()(const ObjectType& o) const { return "object:" + o.description(); }
    std::string operator()(Relation r) const { return "relation:" + std::string(relation_name(r)); }
    std::string operator()(const Count& n) const { return "number:" + std::to_string(n.value); }
  };
  return std::visit(Visitor{}, c);
}

void Lexicon::add(Word word, Concept meaning) {
  if (word.text.empty()) throw PreconditionError("lexicon word must be nonempty");
  if (find(word.text) != nullptr) {
    throw PreconditionError("word '" + word.text + "' already in lexicon");
  }
  if (word_for(meaning) != nullptr) {
    throw PreconditionError("concept " + concept_to_string(meaning) + " already named");
  }
  entries_.push_back({std::move(word), meaning});
}

const Concept* Lexicon::find(std::string_view text) const {
  for (const auto& e : entries_) {
    if (e.word.text == text) return &e.meaning;
  }
  return nullptr;
}

const Word* Lexicon::word_for(const Concept& meaning) const {
  for (const auto& e : entries_) {
    if (e.meaning == meaning) return &e.word;
  }
  return nullptr;
}

bool Lexicon::is_injective() const {
  std::set<std::string> words;
  std::set<std::string> meanings;
  for (const auto& e : entries_) {
    if (!words.insert(e.word.text).second) return false;
    if (!meanings.insert(concept_to_string(e.meaning)).second) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace {
constexpr std::array<std::string_view, 9> kTaskNames = {
    "shape", "color", "material", "object", "composite",
    "relation", "bootstrap", "number", "pragmatic"};
}

std::string_view task_name(Task task) { return kTaskNames[static_cast<std::size_t>(task)]; }

std::optional<Task> parse_task(std::string_view name) {
  for (Task t : kTasks) {
    if (task_name(t) == name) return t;
  }
  return std::nullopt;
}

int syllables_for(Task task) {
  switch (task) {
    case Task::object:
    case Task::composite:
    case Task::relation:
    case Task::bootstrap:
      return 3;
    default:
      return 2;
  }
}

bool is_attribute_task(Task task) {
  return task == Task::shape || task == Task::color || task == Task::material;
}

AttributeKind attribute_task_kind(Task task) {
  switch (task) {
    case Task::shape: return AttributeKind::shape;
    case Task::color: return AttributeKind::color;
    case Task::material: return AttributeKind::material;
    default: throw PreconditionError(std::string(task_name(task)) + " is not an attribute task");
  }
}

bool Episode::is_attention_check() const {
  auto it = metadata.find("attention_check");
  return it != metadata.end() && it->second == "true";
}

void Episode::validate_structure() const {
  if (contexts.size() != kContextCount) {
    throw MalformedEpisode(episode_id + ": expected 6 contexts, got " +
                           std::to_string(contexts.size()));
  }
  if (options.size() != kOptionCount) {
    throw MalformedEpisode(episode_id + ": expected 5 options, got " +
                           std::to_string(options.size()));
  }
  if (answer_index < 0 || answer_index >= kOptionCount) {
    throw MalformedEpisode(episode_id + ": answer index out of range");
  }
  for (std::size_t i = 0; i < options.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (options[i] == options[j]) throw MalformedEpisode(episode_id + ": duplicate options");
    }
  }
  if (!lexicon.is_injective()) throw MalformedEpisode(episode_id + ": lexicon not injective");
}

}  // namespace mewl
