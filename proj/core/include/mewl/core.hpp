#pragma once

// Domain model: attribute values, objects, scenes, utterances, lexicons and
// episodes, plus the spatial / counting / uniqueness semantics shared by the
// generators, the solver and the captioner.

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "mewl/errors.hpp"

namespace mewl {

// ---------------------------------------------------------------------------
// Attributes

enum class AttributeKind : std::uint8_t { size, color, material, shape };

inline constexpr std::array<AttributeKind, 4> kAttributeKinds = {
    AttributeKind::size, AttributeKind::color, AttributeKind::material,
    AttributeKind::shape};

// Kinds that carry novel names in the attribute and composite tasks.
inline constexpr std::array<AttributeKind, 3> kNameableKinds = {
    AttributeKind::color, AttributeKind::material, AttributeKind::shape};

constexpr int kind_cardinality(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::size: return 2;
    case AttributeKind::color: return 8;
    case AttributeKind::material: return 3;
    case AttributeKind::shape: return 3;
  }
  return 0;
}

// Offset of the kind's first value in the flat 0..15 attribute code space.
constexpr int kind_offset(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::size: return 0;
    case AttributeKind::color: return 2;
    case AttributeKind::material: return 10;
    case AttributeKind::shape: return 13;
  }
  return 0;
}

inline constexpr int kAttributeValueCount = 16;
inline constexpr int kObjectTypeCount = 2 * 8 * 3 * 3;

std::string_view kind_name(AttributeKind kind);
std::optional<AttributeKind> parse_kind(std::string_view name);

// One attribute value, e.g. color:cyan. Ordered by its flat code.
class AttributeValue {
 public:
  constexpr AttributeValue() = default;
  AttributeValue(AttributeKind kind, int index);

  static AttributeValue from_code(int code);
  static std::optional<AttributeValue> parse(std::string_view name);
  static std::vector<AttributeValue> all();
  static std::vector<AttributeValue> all_of(AttributeKind kind);

  AttributeKind kind() const noexcept { return kind_; }
  int index() const noexcept { return index_; }
  int code() const noexcept { return kind_offset(kind_) + index_; }
  std::string_view name() const;

  friend bool operator==(const AttributeValue& a, const AttributeValue& b) {
    return a.code() == b.code();
  }
  friend auto operator<=>(const AttributeValue& a, const AttributeValue& b) {
    return a.code() <=> b.code();
  }

 private:
  AttributeKind kind_ = AttributeKind::size;
  int index_ = 0;
};

// Bit set over the 16 attribute values.
class AttributeSet {
 public:
  constexpr AttributeSet() = default;
  static constexpr AttributeSet full() { return AttributeSet(0xFFFF); }

  bool contains(AttributeValue v) const noexcept { return bits_ >> v.code() & 1U; }
  void insert(AttributeValue v) noexcept {
    bits_ = static_cast<std::uint16_t>(bits_ | (1U << v.code()));
  }
  int size() const noexcept;
  bool empty() const noexcept { return bits_ == 0; }
  std::vector<AttributeValue> values() const;
  std::uint16_t bits() const noexcept { return bits_; }

  friend AttributeSet operator&(AttributeSet a, AttributeSet b) {
    return AttributeSet(static_cast<std::uint16_t>(a.bits_ & b.bits_));
  }
  friend bool operator==(AttributeSet, AttributeSet) = default;

 private:
  constexpr explicit AttributeSet(std::uint16_t bits) : bits_(bits) {}
  std::uint16_t bits_ = 0;
};

// The (size, color, material, shape) quadruple; 144 possibilities.
class ObjectType {
 public:
  ObjectType() = default;
  ObjectType(int size, int color, int material, int shape);

  static ObjectType from_code(int code);
  static std::vector<ObjectType> all();

  int code() const noexcept;
  int index(AttributeKind kind) const noexcept {
    return values_[static_cast<std::size_t>(kind)];
  }
  AttributeValue value(AttributeKind kind) const {
    return AttributeValue(kind, index(kind));
  }
  bool has(AttributeValue v) const noexcept { return index(v.kind()) == v.index(); }
  ObjectType with(AttributeValue v) const;
  AttributeSet attributes() const;
  // "small cyan metal cylinder"
  std::string description() const;

  friend bool operator==(const ObjectType&, const ObjectType&) = default;
  friend auto operator<=>(const ObjectType&, const ObjectType&) = default;

 private:
  std::array<std::uint8_t, 4> values_{};
};

// ---------------------------------------------------------------------------
// Geometry

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

// Ground plane: x grows to the right, y grows toward the viewer.
struct Geometry {
  double arena = 8.0;   // side of the square arena
  double delta = 0.8;   // margin for a spatial relation to hold
  double d_min = 1.2;   // minimum pairwise center distance
  double border = 0.5;  // objects keep this far from the arena edge
};

enum class Relation : std::uint8_t { left, right, front, behind };

inline constexpr std::array<Relation, 4> kRelations = {
    Relation::left, Relation::right, Relation::front, Relation::behind};

std::string_view relation_name(Relation r);
std::optional<Relation> parse_relation(std::string_view name);
Relation inverse(Relation r);
bool same_axis(Relation a, Relation b);

class RelationSet {
 public:
  constexpr RelationSet() = default;
  static constexpr RelationSet full() { return RelationSet(0xF); }

  bool contains(Relation r) const noexcept { return bits_ >> static_cast<int>(r) & 1U; }
  void insert(Relation r) noexcept {
    bits_ = static_cast<std::uint8_t>(bits_ | (1U << static_cast<int>(r)));
  }
  int size() const noexcept;
  bool empty() const noexcept { return bits_ == 0; }
  std::vector<Relation> values() const;
  RelationSet inverted() const;

  friend RelationSet operator&(RelationSet a, RelationSet b) {
    return RelationSet(static_cast<std::uint8_t>(a.bits_ & b.bits_));
  }
  friend bool operator==(RelationSet, RelationSet) = default;

 private:
  constexpr explicit RelationSet(std::uint8_t bits) : bits_(bits) {}
  std::uint8_t bits_ = 0;
};

// ---------------------------------------------------------------------------
// Scenes

struct ObjectSpec {
  int id = 0;
  ObjectType type;
  Point position;
  friend bool operator==(const ObjectSpec&, const ObjectSpec&) = default;
};

// The pointing marker is implied by `pointed`; it is never an ObjectSpec in
// `objects`, so it is never counted and never a referent.
inline constexpr std::string_view kPointerMarkerDescription = "small yellow rubber arrow";

struct Scene {
  std::vector<ObjectSpec> objects;
  std::optional<int> pointed;

  const ObjectSpec& object(int id) const;
  bool has_pointer_marker() const noexcept { return pointed.has_value(); }
  // Object types, sorted; two scenes with equal keys show the same objects.
  std::vector<ObjectType> type_key() const;
  // Throws MalformedScene when ids, spacing or the pointer are invalid.
  void validate(const Geometry& geometry = {}) const;

  friend bool operator==(const Scene&, const Scene&) = default;
};

// Relations r such that "a is r of b". At most one per axis.
RelationSet relations_between(int a, int b, const Scene& scene, double delta = Geometry{}.delta);
RelationSet relations_between(Point a, Point b, double delta = Geometry{}.delta);

int count_objects(const Scene& scene);

// Attribute values held by `target` and by no other object of the scene.
AttributeSet unique_attributes(const Scene& scene, int target);

// ("<color>", "<shape>") of the target; AmbiguousReferent when another object
// shares both.
std::pair<std::string, std::string> referring_phrase(const Scene& scene, int target);

// Object id matching a "<color> <shape>" phrase, if exactly one matches.
std::optional<int> resolve_phrase(const Scene& scene, std::string_view color,
                                  std::string_view shape);

// ---------------------------------------------------------------------------
// Words, utterances, concepts

struct Word {
  std::string text;
  std::vector<std::string> syllables;
  friend bool operator==(const Word&, const Word&) = default;
};

struct Utterance {
  std::vector<std::string> tokens;

  std::string text() const;  // space-joined
  friend bool operator==(const Utterance&, const Utterance&) = default;
  friend auto operator<=>(const Utterance&, const Utterance&) = default;
};

// Attribute names, relation names and "and".
bool is_familiar_token(std::string_view token);

struct Count {
  int value = 1;
  friend bool operator==(const Count&, const Count&) = default;
  friend auto operator<=>(const Count&, const Count&) = default;
};

using Concept = std::variant<AttributeValue, ObjectType, Relation, Count>;

std::string concept_to_string(const Concept& c);

struct LexiconEntry {
  Word word;
  Concept meaning;
  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

// Injective Word -> Concept map; insertion order is preserved.
class Lexicon {
 public:
  void add(Word word, Concept meaning);
  const Concept* find(std::string_view text) const;
  const Word* word_for(const Concept& meaning) const;
  std::span<const LexiconEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool is_injective() const;

  friend bool operator==(const Lexicon&, const Lexicon&) = default;

 private:
  std::vector<LexiconEntry> entries_;
};

// ---------------------------------------------------------------------------
// Episodes

enum class Task : std::uint8_t {
  shape,
  color,
  material,
  object,
  composite,
  relation,
  bootstrap,
  number,
  pragmatic
};

inline constexpr std::array<Task, 9> kTasks = {
    Task::shape,    Task::color,     Task::material, Task::object,   Task::composite,
    Task::relation, Task::bootstrap, Task::number,   Task::pragmatic};

std::string_view task_name(Task task);
std::optional<Task> parse_task(std::string_view name);
// Syllables per novel word: 3 for object/composite/relation/bootstrap, else 2.
int syllables_for(Task task);
bool is_attribute_task(Task task);
AttributeKind attribute_task_kind(Task task);

inline constexpr int kContextCount = 6;
inline constexpr int kOptionCount = 5;

struct Panel {
  Scene scene;
  Utterance utterance;
  friend bool operator==(const Panel&, const Panel&) = default;
};

struct Episode {
  std::string episode_id;
  Task task = Task::shape;
  std::vector<Panel> contexts;
  Scene query;
  std::vector<Utterance> options;
  int answer_index = 0;
  Lexicon lexicon;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> metadata;

  bool is_attention_check() const;
  // Throws MalformedEpisode on count, index or option-distinctness violations.
  void validate_structure() const;

  friend bool operator==(const Episode&, const Episode&) = default;
};

}  // namespace mewl
