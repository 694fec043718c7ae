// Acceptance suite. One PASS/FAIL line per criterion; exit status is the
// number of failures (capped at 1).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "brute_force.hpp"
#include "golden.hpp"
#include "invariants.hpp"
#include "mewl/caption.hpp"
#include "mewl/harness.hpp"
#include "mewl/solver.hpp"
#include "mewl/taskgen.hpp"

using namespace mewl;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s  %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Episode> of_task(const std::vector<Episode>& eps, Task task) {
  std::vector<Episode> out;
  for (const auto& e : eps) {
    if (e.task == task) out.push_back(e);
  }
  return out;
}

}  // namespace

int main() {
  const fs::path dir = fs::temp_directory_path() / ("mewl-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const GenConfig config;  // defaults: 3000/600/600 per task, seed 0

  // --- split sizes and generation time ---------------------------------------
  std::map<Split, std::vector<Episode>> splits;
  {
    auto t0 = Clock::now();
    bool sizes_ok = true;
    std::string detail;
    for (Split s : kSplits) {
      auto eps = generate_split(config, s);
      write_dataset(eps, dir / (std::string(split_name(s)) + ".jsonl"), split_name(s), config.global_seed);
      std::map<Task, int> per;
      for (const auto& e : eps) ++per[e.task];
      const int want = SplitCounts{}.of(s);
      for (Task t : kTasks) sizes_ok = sizes_ok && per[t] == want;
      detail += std::string(split_name(s)) + "=" + std::to_string(eps.size()) + " ";
      splits[s] = std::move(eps);
    }
    double secs = seconds_since(t0);
    sizes_ok = sizes_ok && splits[Split::train].size() == 27000 && splits[Split::val].size() == 5400 &&
               splits[Split::test].size() == 5400;
    report(sizes_ok && secs < 600, "split sizes",
           detail + "(3000/600/600 per task), generated and certified in " + fmt("%.1fs (limit 600s)", secs));
  }

  // --- oracle soundness after serialization ----------------------------------
  std::vector<Episode> test;
  {
    bool all_perfect = true;
    double test_secs = 0;
    std::string detail;
    for (Split s : kSplits) {
      auto eps = read_dataset(dir / (std::string(split_name(s)) + ".jsonl"));
      auto t0 = Clock::now();
      std::vector<AnswerRecord> answers;
      for (const auto& e : eps) answers.push_back(agent_oracle(e));
      double secs = seconds_since(t0);
      auto r = evaluate(eps, answers);
      bool perfect = r.per_task.size() == 9;
      for (const auto& [t, score] : r.per_task) perfect = perfect && score.correct == score.attempted;
      all_perfect = all_perfect && perfect;
      detail += std::string(split_name(s)) + fmt(" %.2f%% ", 100 * r.average);
      if (s == Split::test) {
        test_secs = secs;
        test = std::move(eps);
      }
    }
    report(all_perfect && test_secs < 300, "oracle soundness",
           detail + "per-task exact on all splits; test split solved in " + fmt("%.2fs (limit 300s)", test_secs));
  }

  // --- chance calibration --------------------------------------------------
  {
    std::vector<AnswerRecord> answers;
    for (const auto& e : test) answers.push_back(agent_random(e, 2024));
    int correct = 0;
    for (std::size_t i = 0; i < test.size(); ++i) correct += answers[i].chosen_index == test[i].answer_index;
    double acc = static_cast<double>(correct) / static_cast<double>(test.size());
    report(acc >= 0.18 && acc <= 0.22, "chance calibration",
           fmt("random agent (seed 2024) %.2f%% on %.0f test episodes, band [18%%, 22%%]", 100 * acc,
               static_cast<double>(test.size())));
  }

  // --- brute-force equivalence ------------------------------------------------
  {
    bool ok = true;
    std::string detail;
    for (Task t : kTasks) {
      auto eps = of_task(test, t);
      std::size_t max_space = 0;
      int agree = 0;
      for (std::size_t i = 0; i < 100 && i < eps.size(); ++i) {
        const auto& e = eps[i];
        auto bf = oracle::brute_force(e);
        max_space = std::max(max_space, bf.space_size);
        auto solver = consistent_lexicons(t, e.contexts, episode_delta(e));
        auto sr = answer(e);
        if (bf.surviving == solver && bf.support == sr.per_option_support && bf.answer == sr.chosen_index) ++agree;
      }
      ok = ok && agree == 100;
      detail += std::string(task_name(t)) + " " + std::to_string(agree) + "/100 (space " +
                std::to_string(max_space) + ") ";
    }
    report(ok, "brute-force equivalence", detail);
  }

  // --- cross-situational necessity -------------------------------------------
  {
    bool ok = true;
    std::string detail;
    for (Task t : {Task::relation, Task::number}) {
      auto eps = of_task(test, t);
      int k1 = 0;
      for (const auto& e : eps) k1 += solve_ablated(e, 1).chosen_index == e.answer_index;
      double acc = static_cast<double>(k1) / static_cast<double>(eps.size());
      ok = ok && acc < 1.0;
      detail += std::string(task_name(t)) + fmt(" k=1 %.1f%% on %.0f; ", 100 * acc, static_cast<double>(eps.size()));
    }
    std::size_t same = 0;
    for (const auto& e : test) same += agent_ablated(e, 6).chosen_index == agent_oracle(e).chosen_index;
    ok = ok && same == test.size();
    detail += "k=6 matches oracle on " + std::to_string(same) + "/" + std::to_string(test.size());
    report(ok, "cross-situational necessity", detail);
  }

  // --- golden captions ---------------------------------------------------------
  {
    Episode ep = golden::pragmatic_episode();
    bool a = caption_objects(golden::object_scene()) == golden::kObjectCaption;
    bool b = caption_relations(golden::relation_scene()) == golden::kRelationCaption;
    bool c = caption_pragmatic(golden::pragmatic_scene()) == golden::kPragmaticCaption;
    int alim = -1;
    for (int i = 0; i < 5; ++i) {
      if (ep.options[static_cast<std::size_t>(i)].text() == "alim") alim = i;
    }
    bool prompt = build_prompt(ep, alim) == golden::kPragmaticPrompt;
    bool solved = answer(ep).chosen_index == alim;
    report(a && b && c && prompt && solved, "caption golden tests",
           std::string("object ") + (a ? "ok" : "diff") + ", relation " + (b ? "ok" : "diff") + ", pointing " +
               (c ? "ok" : "diff") + ", prompt " + (prompt ? "ok" : "diff") + ", solver picks alim " +
               (solved ? "yes" : "no"));
  }

  // --- generator invariants ------------------------------------------------------
  {
    bool ok = ObjectType::all().size() == 144;
    std::string detail = "universe " + std::to_string(ObjectType::all().size()) + "; ";
    for (Task t : kTasks) {
      int good = 0;
      std::string first_error;
      for (int i = 0; i < 1000; ++i) {
        Rng rng(mix_seed(0xACCE, task_name(t), static_cast<std::uint64_t>(i)));
        Episode e = generate_certified(t, rng).first;
        auto err = invariants::check(e);
        if (err.empty()) {
          ++good;
        } else if (first_error.empty()) {
          first_error = err;
        }
      }
      ok = ok && good == 1000;
      detail += std::string(task_name(t)) + " " + std::to_string(good) + "/1000";
      if (!first_error.empty()) detail += " [" + first_error + "]";
      detail += " ";
    }
    report(ok, "generator invariants", detail);
  }

  // --- determinism -----------------------------------------------------------
  {
    bool ok = true;
    std::string detail;
    for (Split s : kSplits) {
      fs::path original = dir / (std::string(split_name(s)) + ".jsonl");
      auto manifest = read_manifest(original);
      if (!manifest) {
        ok = false;
        continue;
      }
      GenConfig cfg;
      cfg.global_seed = manifest->global_seed;
      for (Task t : kTasks) {
        auto it = manifest->counts.find(std::string(task_name(t)));
        cfg.counts[t].of(s) = it == manifest->counts.end() ? 0 : it->second;
      }
      fs::path again = dir / (std::string(split_name(s)) + ".again.jsonl");
      write_dataset(generate_split(cfg, s), again, split_name(s), cfg.global_seed);
      bool same = slurp(original) == slurp(again);
      ok = ok && same;
      detail += std::string(split_name(s)) + (same ? " identical " : " DIFFERS ");
    }
    report(ok, "determinism", detail + "(regenerated from manifest)");
  }

  fs::remove_all(dir);
  std::printf("%s\n", failures == 0 ? "ALL PRIMARY CRITERIA PASS" : "SOME PRIMARY CRITERIA FAIL");
  return failures == 0 ? 0 : 1;
}
