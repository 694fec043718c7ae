#pragma once

// HTTP service for human-study sessions: episodes with answer keys stripped,
// SVG renders, an append-only answer log and live reports.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mewl/core.hpp"
#include "mewl/harness.hpp"

namespace mewl {

inline constexpr int kSessionQuestions = 10;
inline constexpr int kSessionAttentionChecks = 2;

struct ServiceOptions {
  std::uint64_t seed = 0;
  // Every accepted answer is also appended here, one JSON line each.
  std::optional<std::filesystem::path> answer_log;
};

// Attention-check ids are "<base id>-ac" and derive deterministically from
// the base episode.
std::string attention_check_id(const std::string& base_id);
Episode attention_check_for(const Episode& base);

// Episode JSON as sent to participants: no answer_index, lexicon, metadata or
// seed; adds render URLs and the attention-check flag.
Json public_episode_json(const Episode& episode);

class StudyService {
 public:
  explicit StudyService(std::vector<Episode> dataset, ServiceOptions options = {});
  ~StudyService();
  StudyService(const StudyService&) = delete;
  StudyService& operator=(const StudyService&) = delete;

  // Binds to host:port; port 0 picks a free one. Returns the bound port.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();
  bool running() const;

  std::vector<AnswerRecord> answers() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// "host:port" (or ":port"). Blocks serving until the process exits.
void serve(std::vector<Episode> dataset, const std::string& bind_address,
           ServiceOptions options = {});

}  // namespace mewl
