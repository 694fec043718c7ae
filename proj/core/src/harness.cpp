#include "mewl/harness.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "mewl/rng.hpp"
#include "mewl/solver.hpp"

namespace mewl {
namespace {

[[noreturn]] void schema(const std::string& what) { throw SchemaError(0, what); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) schema(std::string("expected an object holding '") + name + "'");
  auto it = j.find(name);
  if (it == j.end()) schema(std::string("missing field '") + name + "'");
  return *it;
}

std::string string_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_string()) schema(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

AttributeValue attribute_of(AttributeKind kind, const Json& j, const char* name) {
  auto v = AttributeValue::parse(string_field(j, name));
  if (!v || v->kind() != kind) schema(std::string("bad ") + name + " value");
  return *v;
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_all(const std::filesystem::path& path, const std::string& data) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << data;
  if (!out) throw IoError("write failed for " + path.string());
}

template <typename F>
auto at_line(std::size_t line, F&& f) {
  try {
    return f();
  } catch (const SchemaError& e) {
    std::string what = e.what();
    // Strip the placeholder "line 0: " prefix from nested errors.
    if (what.rfind("line 0: ", 0) == 0) what = what.substr(8);
    throw SchemaError(line, what);
  } catch (const Json::exception& e) {
    throw SchemaError(line, e.what());
  } catch (const PreconditionError& e) {
    throw SchemaError(line, e.what());
  }
}

}  // namespace

Json scene_to_json(const Scene& scene) {
  Json objs = Json::array();
  for (const auto& o : scene.objects) {
    objs.push_back({{"id", o.id},
                    {"size", o.type.value(AttributeKind::size).name()},
                    {"color", o.type.value(AttributeKind::color).name()},
                    {"material", o.type.value(AttributeKind::material).name()},
                    {"shape", o.type.value(AttributeKind::shape).name()},
                    {"x", o.position.x},
                    {"y", o.position.y}});
  }
  Json j = {{"objects", std::move(objs)}};
  if (scene.pointed) j["pointed"] = *scene.pointed;
  return j;
}

Scene scene_from_json(const Json& j) {
  Scene s;
  const Json& objs = field(j, "objects");
  if (!objs.is_array()) schema("'objects' must be an array");
  for (const auto& o : objs) {
    ObjectSpec spec;
    spec.id = field(o, "id").get<int>();
    spec.type = ObjectType(attribute_of(AttributeKind::size, o, "size").index(),
                           attribute_of(AttributeKind::color, o, "color").index(),
                           attribute_of(AttributeKind::material, o, "material").index(),
                           attribute_of(AttributeKind::shape, o, "shape").index());
    spec.position = {field(o, "x").get<double>(), field(o, "y").get<double>()};
    s.objects.push_back(spec);
  }
  if (auto it = j.find("pointed"); it != j.end() && !it->is_null()) s.pointed = it->get<int>();
  return s;
}

Json utterance_to_json(const Utterance& u) { return u.tokens; }

Utterance utterance_from_json(const Json& j) {
  if (!j.is_array()) schema("utterance must be an array of tokens");
  Utterance u;
  for (const auto& t : j) {
    if (!t.is_string()) schema("utterance tokens must be strings");
    u.tokens.push_back(t.get<std::string>());
  }
  return u;
}

Json concept_to_json(const Concept& c) {
  struct Visitor {
    Json operator()(const AttributeValue& v) const {
      return {{"type", "attribute"}, {"kind", kind_name(v.kind())}, {"value", v.name()}};
    }
    Json operator()(const ObjectType& o) const {
      return {{"type", "object"},
              {"size", o.value(AttributeKind::size).name()},
              {"color", o.value(AttributeKind::color).name()},
              {"material", o.value(AttributeKind::material).name()},
              {"shape", o.value(AttributeKind::shape).name()}};
    }
    Json operator()(Relation r) const { return {{"type", "relation"}, {"value", relation_name(r)}}; }
    Json operator()(const Count& n) const { return {{"type", "number"}, {"value", n.value}}; }
  };
  return std::visit(Visitor{}, c);
}

Concept concept_from_json(const Json& j) {
  std::string type = string_field(j, "type");
  if (type == "attribute") {
    auto kind = parse_kind(string_field(j, "kind"));
    if (!kind) schema("bad attribute kind");
    return attribute_of(*kind, j, "value");
  }
  if (type == "object") {
    return ObjectType(attribute_of(AttributeKind::size, j, "size").index(),
                      attribute_of(AttributeKind::color, j, "color").index(),
                      attribute_of(AttributeKind::material, j, "material").index(),
                      attribute_of(AttributeKind::shape, j, "shape").index());
  }
  if (type == "relation") {
    auto r = parse_relation(string_field(j, "value"));
    if (!r) schema("bad relation");
    return *r;
  }
  if (type == "number") {
    int n = field(j, "value").get<int>();
    if (n < 1 || n > 6) schema("number concept must be in 1..6");
    return Count{n};
  }
  schema("unknown concept type '" + type + "'");
}

Json episode_to_json(const Episode& ep) {
  Json contexts = Json::array();
  for (const auto& p : ep.contexts) {
    contexts.push_back({{"scene", scene_to_json(p.scene)}, {"utterance", utterance_to_json(p.utterance)}});
  }
  Json options = Json::array();
  for (const auto& o : ep.options) options.push_back(utterance_to_json(o));
  Json lexicon = Json::array();
  for (const auto& e : ep.lexicon.entries()) {
    lexicon.push_back({{"word", e.word.text}, {"syllables", e.word.syllables}, {"concept", concept_to_json(e.meaning)}});
  }
  Json metadata = Json::object();
  for (const auto& [k, v] : ep.metadata) metadata[k] = v;
  return {{"episode_id", ep.episode_id},
          {"task", task_name(ep.task)},
          {"seed", ep.seed},
          {"contexts", std::move(contexts)},
          {"query", scene_to_json(ep.query)},
          {"options", std::move(options)},
          {"answer_index", ep.answer_index},
          {"lexicon", std::move(lexicon)},
          {"metadata", std::move(metadata)}};
}

Episode episode_from_json(const Json& j) {
  Episode ep;
  ep.episode_id = string_field(j, "episode_id");
  auto task = parse_task(string_field(j, "task"));
  if (!task) schema("unknown task");
  ep.task = *task;
  ep.seed = field(j, "seed").get<std::uint64_t>();
  for (const auto& c : field(j, "contexts")) {
    ep.contexts.push_back({scene_from_json(field(c, "scene")), utterance_from_json(field(c, "utterance"))});
  }
  ep.query = scene_from_json(field(j, "query"));
  for (const auto& o : field(j, "options")) ep.options.push_back(utterance_from_json(o));
  ep.answer_index = field(j, "answer_index").get<int>();
  for (const auto& e : field(j, "lexicon")) {
    Word w;
    w.text = string_field(e, "word");
    w.syllables = field(e, "syllables").get<std::vector<std::string>>();
    ep.lexicon.add(std::move(w), concept_from_json(field(e, "concept")));
  }
  for (const auto& [k, v] : field(j, "metadata").items()) ep.metadata[k] = v.get<std::string>();
  return ep;
}

std::string episode_to_line(const Episode& episode) { return episode_to_json(episode).dump(); }

// ---------------------------------------------------------------------------

int DatasetManifest::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0,
                         [](int acc, const auto& kv) { return acc + kv.second; });
}

Json manifest_to_json(const DatasetManifest& m) {
  Json counts = Json::object();
  for (Task t : kTasks) {
    if (auto it = m.counts.find(std::string(task_name(t))); it != m.counts.end()) {
      counts[it->first] = it->second;
    }
  }
  return {{"format_version", m.format_version},
          {"split", m.split},
          {"global_seed", m.global_seed},
          {"counts", std::move(counts)},
          {"total", m.total()}};
}

DatasetManifest manifest_from_json(const Json& j) {
  DatasetManifest m;
  m.format_version = string_field(j, "format_version");
  m.split = string_field(j, "split");
  m.global_seed = field(j, "global_seed").get<std::uint64_t>();
  for (const auto& [k, v] : field(j, "counts").items()) m.counts[k] = v.get<int>();
  return m;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& episodes_path) {
  return std::filesystem::path(episodes_path.string() + ".manifest.json");
}

DatasetManifest write_dataset(const std::vector<Episode>& episodes,
                              const std::filesystem::path& path, std::string_view split,
                              std::uint64_t global_seed) {
  DatasetManifest m;
  m.split = std::string(split);
  m.global_seed = global_seed;
  std::string body;
  for (const auto& ep : episodes) {
    body += episode_to_line(ep);
    body += '\n';
    m.counts[std::string(task_name(ep.task))] += 1;
  }
  write_all(path, body);
  write_all(manifest_path_for(path), manifest_to_json(m).dump(2) + "\n");
  return m;
}

std::optional<DatasetManifest> read_manifest(const std::filesystem::path& episodes_path) {
  auto mp = manifest_path_for(episodes_path);
  if (!std::filesystem::exists(mp)) return std::nullopt;
  return at_line(1, [&] { return manifest_from_json(Json::parse(read_all(mp))); });
}

std::vector<Episode> read_dataset(const std::filesystem::path& path) {
  if (auto m = read_manifest(path); m && m->format_version != kFormatVersion) {
    throw SchemaError(0, "format version mismatch: expected " + std::string(kFormatVersion) +
                             ", found " + m->format_version);
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<Episode> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    out.push_back(at_line(line_no, [&] {
      Episode ep = episode_from_json(Json::parse(line));
      try {
        ep.validate_structure();
      } catch (const MalformedEpisode& e) {
        schema(e.what());
      }
      return ep;
    }));
  }
  return out;
}

// ---------------------------------------------------------------------------

Json answer_to_json(const AnswerRecord& a) {
  Json j = {{"episode_id", a.episode_id}, {"chosen_index", a.chosen_index}, {"agent_id", a.agent_id}};
  if (a.elapsed_ms) j["elapsed_ms"] = *a.elapsed_ms;
  j["is_attention_check"] = a.is_attention_check;
  return j;
}

AnswerRecord answer_from_json(const Json& j, std::size_t line) {
  return at_line(line, [&] {
    AnswerRecord a;
    a.episode_id = string_field(j, "episode_id");
    const Json& chosen = field(j, "chosen_index");
    if (!chosen.is_number_integer()) schema("chosen_index must be an integer");
    a.chosen_index = chosen.get<int>();
    if (a.chosen_index < 0 || a.chosen_index >= kOptionCount) schema("chosen_index out of range");
    a.agent_id = string_field(j, "agent_id");
    if (auto it = j.find("elapsed_ms"); it != j.end() && !it->is_null()) {
      if (!it->is_number()) schema("elapsed_ms must be a number");
      a.elapsed_ms = it->get<std::int64_t>();
    }
    if (auto it = j.find("is_attention_check"); it != j.end()) {
      if (!it->is_boolean()) schema("is_attention_check must be a boolean");
      a.is_attention_check = it->get<bool>();
    }
    return a;
  });
}

void write_answers(const std::vector<AnswerRecord>& answers, const std::filesystem::path& path) {
  std::string body;
  for (const auto& a : answers) body += answer_to_json(a).dump() + "\n";
  write_all(path, body);
}

std::vector<AnswerRecord> read_answers(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<AnswerRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    out.push_back(at_line(line_no, [&] { return answer_from_json(Json::parse(line), line_no); }));
  }
  return out;
}

EvalReport evaluate(const std::vector<Episode>& episodes, const std::vector<AnswerRecord>& answers,
                    const std::string& agent_id) {
  std::unordered_map<std::string, const Episode*> by_id;
  for (const auto& ep : episodes) by_id[ep.episode_id] = &ep;

  EvalReport report;
  report.agent_id = agent_id;
  if (report.agent_id.empty() && !answers.empty()) report.agent_id = answers.front().agent_id;

  // Last record per episode wins.
  std::map<std::string, const AnswerRecord*> latest;
  for (const auto& a : answers) {
    if (a.agent_id != report.agent_id) continue;
    if (!by_id.contains(a.episode_id)) throw UnknownEpisodeId(a.episode_id);
    latest[a.episode_id] = &a;
  }
  for (const auto& [id, a] : latest) {
    const Episode& ep = *by_id.at(id);
    bool correct = a->chosen_index == ep.answer_index;
    if (a->is_attention_check || ep.is_attention_check()) {
      ++report.attention_checks;
      if (correct) ++report.attention_passed;
      continue;
    }
    auto& score = report.per_task[ep.task];
    ++score.attempted;
    if (correct) ++score.correct;
  }
  if (!report.per_task.empty()) {
    double sum = 0;
    for (const auto& [t, s] : report.per_task) sum += s.accuracy();
    report.average = sum / static_cast<double>(report.per_task.size());
  }
  if (report.attention_checks > 0) {
    report.attention_pass = report.attention_passed == report.attention_checks;
  }
  return report;
}

Json report_to_json(const EvalReport& r) {
  Json tasks = Json::object();
  for (Task t : kTasks) {
    auto it = r.per_task.find(t);
    if (it == r.per_task.end()) continue;
    tasks[std::string(task_name(t))] = {{"accuracy", it->second.accuracy()},
                                        {"correct", it->second.correct},
                                        {"attempted", it->second.attempted}};
  }
  Json j = {{"agent_id", r.agent_id}, {"per_task", std::move(tasks)}, {"average", r.average},
            {"attention_checks", r.attention_checks}, {"attention_passed", r.attention_passed}};
  j["attention_pass"] = r.attention_pass ? Json(*r.attention_pass) : Json(nullptr);
  return j;
}

std::string format_report_table(const std::vector<EvalReport>& reports) {
  std::size_t name_width = 6;
  for (const auto& r : reports) name_width = std::max(name_width, r.agent_id.size());
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  std::string out = pad("Models", name_width);
  for (Task t : kTasks) out += "  " + std::string(task_name(t));
  out += "  Avg.\n";
  for (const auto& r : reports) {
    out += pad(r.agent_id, name_width);
    for (Task t : kTasks) {
      std::string cell = "-";
      if (auto it = r.per_task.find(t); it != r.per_task.end()) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.1f", 100.0 * it->second.accuracy());
        cell = buf;
      }
      out += "  " + pad(cell, task_name(t).size());
    }
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.1f", 100.0 * r.average);
    out += "  " + std::string(buf) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

AnswerRecord agent_random(const Episode& episode, std::uint64_t seed) {
  Rng rng(mix_seed(seed, episode.episode_id, 0));
  return {episode.episode_id, static_cast<int>(rng.below(kOptionCount)), "random", std::nullopt,
          episode.is_attention_check()};
}

AnswerRecord agent_oracle(const Episode& episode) {
  return {episode.episode_id, answer(episode).chosen_index, "oracle", std::nullopt,
          episode.is_attention_check()};
}

AnswerRecord agent_ablated(const Episode& episode, int k) {
  return {episode.episode_id, solve_ablated(episode, k).chosen_index, "ablated-k" + std::to_string(k),
          std::nullopt, episode.is_attention_check()};
}

}  // namespace mewl
