#pragma once

// Dataset serialization, agents and evaluation.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mewl/core.hpp"
#include "mewl/taskgen.hpp"

namespace mewl {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kFormatVersion = "mewl-episodes/1";

// --- JSON mapping ----------------------------------------------------------

Json scene_to_json(const Scene& scene);
Scene scene_from_json(const Json& j);
Json utterance_to_json(const Utterance& u);
Utterance utterance_from_json(const Json& j);
Json concept_to_json(const Concept& c);
Concept concept_from_json(const Json& j);
Json episode_to_json(const Episode& episode);
Episode episode_from_json(const Json& j);
// One JSONL line, no trailing newline.
std::string episode_to_line(const Episode& episode);

// --- Datasets --------------------------------------------------------------

struct DatasetManifest {
  std::string split;
  std::map<std::string, int> counts;  // task name -> episodes
  std::uint64_t global_seed = 0;
  std::string format_version = std::string(kFormatVersion);

  int total() const;
  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

Json manifest_to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const Json& j);

// "<episodes path>.manifest.json"
std::filesystem::path manifest_path_for(const std::filesystem::path& episodes_path);

// Writes the JSONL file and its manifest sidecar.
DatasetManifest write_dataset(const std::vector<Episode>& episodes,
                              const std::filesystem::path& path, std::string_view split,
                              std::uint64_t global_seed);

// Reads a JSONL file. A manifest sidecar, when present, must carry the
// current format version. Throws IoError or SchemaError(line).
std::vector<Episode> read_dataset(const std::filesystem::path& path);
std::optional<DatasetManifest> read_manifest(const std::filesystem::path& episodes_path);

// --- Answers and evaluation -----------------------------------------------

struct AnswerRecord {
  std::string episode_id;
  int chosen_index = 0;
  std::string agent_id;
  std::optional<std::int64_t> elapsed_ms;
  bool is_attention_check = false;

  friend bool operator==(const AnswerRecord&, const AnswerRecord&) = default;
};

Json answer_to_json(const AnswerRecord& a);
// Throws SchemaError(line) on malformed records.
AnswerRecord answer_from_json(const Json& j, std::size_t line = 0);

void write_answers(const std::vector<AnswerRecord>& answers, const std::filesystem::path& path);
std::vector<AnswerRecord> read_answers(const std::filesystem::path& path);

struct TaskScore {
  int correct = 0;
  int attempted = 0;
  double accuracy() const { return attempted == 0 ? 0.0 : static_cast<double>(correct) / attempted; }
};

struct EvalReport {
  std::string agent_id;
  std::map<Task, TaskScore> per_task;  // only tasks with attempts
  double average = 0.0;                // mean of per-task accuracies
  int attention_checks = 0;
  int attention_passed = 0;
  // Set when attention checks were answered; false if any was failed.
  std::optional<bool> attention_pass;
};

// Last record per (agent, episode) wins. Attention-check records are kept out
// of accuracy and only drive the pass flag. Throws UnknownEpisodeId.
EvalReport evaluate(const std::vector<Episode>& episodes, const std::vector<AnswerRecord>& answers,
                    const std::string& agent_id = "");

Json report_to_json(const EvalReport& r);
// Nine task columns then Avg., percentages to one decimal.
std::string format_report_table(const std::vector<EvalReport>& reports);

// --- Agents ----------------------------------------------------------------

AnswerRecord agent_random(const Episode& episode, std::uint64_t seed);
AnswerRecord agent_oracle(const Episode& episode);
AnswerRecord agent_ablated(const Episode& episode, int k);

}  // namespace mewl
