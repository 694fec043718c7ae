// mewl: generate, solve, evaluate, render, caption and serve episode sets.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "mewl/caption.hpp"
#include "mewl/harness.hpp"
#include "mewl/render.hpp"
#include "mewl/service.hpp"
#include "mewl/taskgen.hpp"

namespace fs = std::filesystem;
using namespace mewl;

namespace {

fs::path data_dir() {
  const char* env = std::getenv("MEWL_DATA_DIR");
  return env && *env ? fs::path(env) : fs::path("data");
}

fs::path default_episodes() { return data_dir() / "test.jsonl"; }

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

struct GenArgs {
  std::string task = "all";
  std::optional<int> train, val, test;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string config;
  unsigned threads = 0;
};

int run_gen(const GenArgs& a) {
  GenConfig cfg = a.config.empty() ? GenConfig{} : GenConfig::load(a.config);
  if (a.seed) cfg.global_seed = *a.seed;
  for (auto& [task, counts] : cfg.counts) {
    if (a.train) counts.train = *a.train;
    if (a.val) counts.val = *a.val;
    if (a.test) counts.test = *a.test;
  }
  std::vector<Task> tasks;
  if (a.task == "all") {
    tasks.assign(kTasks.begin(), kTasks.end());
  } else {
    auto t = parse_task(a.task);
    if (!t) throw PreconditionError("unknown task '" + a.task + "'");
    tasks.push_back(*t);
  }
  fs::path out = a.out.empty() ? data_dir() : fs::path(a.out);
  for (Split split : kSplits) {
    int n = 0;
    for (Task t : tasks) n += cfg.count(t, split);
    if (n == 0) continue;
    auto start = std::chrono::steady_clock::now();
    auto episodes = generate_split(cfg, split, tasks, a.threads);
    auto path = out / (std::string(split_name(split)) + ".jsonl");
    write_dataset(episodes, path, split_name(split), cfg.global_seed);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::fprintf(stderr, "%s: %zu episodes in %.1fs -> %s\n", std::string(split_name(split)).c_str(),
                 episodes.size(), secs, path.string().c_str());
  }
  return 0;
}

struct SolveArgs {
  std::string in;
  std::string agent = "oracle";
  int k = kContextCount;
  std::uint64_t seed = 0;
  std::string answers;
};

int run_solve(const SolveArgs& a) {
  auto episodes = read_dataset(a.in.empty() ? default_episodes() : fs::path(a.in));
  std::vector<AnswerRecord> answers;
  answers.reserve(episodes.size());
  for (const auto& ep : episodes) {
    if (a.agent == "oracle") {
      answers.push_back(agent_oracle(ep));
    } else if (a.agent == "random") {
      answers.push_back(agent_random(ep, a.seed));
    } else {
      answers.push_back(agent_ablated(ep, a.k));
    }
  }
  if (a.answers.empty() || a.answers == "-") {
    for (const auto& r : answers) std::cout << answer_to_json(r).dump() << '\n';
  } else {
    write_answers(answers, a.answers);
  }
  return 0;
}

int run_eval(const std::string& episodes_path, const std::string& answers_path, const std::string& format) {
  auto episodes = read_dataset(episodes_path.empty() ? default_episodes() : fs::path(episodes_path));
  auto answers = read_answers(answers_path);
  std::vector<std::string> agents;
  for (const auto& r : answers) {
    if (std::find(agents.begin(), agents.end(), r.agent_id) == agents.end()) agents.push_back(r.agent_id);
  }
  std::vector<EvalReport> reports;
  for (const auto& agent : agents) reports.push_back(evaluate(episodes, answers, agent));
  if (format == "json") {
    Json out = Json::array();
    for (const auto& r : reports) out.push_back(report_to_json(r));
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << format_report_table(reports);
  }
  return 0;
}

int run_render(const std::string& episodes_path, const std::string& out_dir) {
  auto episodes = read_dataset(episodes_path.empty() ? default_episodes() : fs::path(episodes_path));
  for (const auto& ep : episodes) {
    fs::path dir = fs::path(out_dir) / ep.episode_id;
    for (std::size_t i = 0; i < ep.contexts.size(); ++i) {
      write_text(dir / (std::to_string(i) + ".svg"), render_svg(ep.contexts[i].scene));
    }
    write_text(dir / "query.svg", render_svg(ep.query));
  }
  return 0;
}

int run_caption(const std::string& episodes_path, const std::string& out) {
  auto episodes = read_dataset(episodes_path.empty() ? default_episodes() : fs::path(episodes_path));
  std::string body;
  for (const auto& ep : episodes) {
    for (int i = 0; i < static_cast<int>(ep.options.size()); ++i) {
      Json line = {{"episode_id", ep.episode_id}, {"option_index", i}, {"prompt", build_prompt(ep, i)}};
      body += line.dump() + "\n";
    }
  }
  if (out.empty() || out == "-") {
    std::cout << body;
  } else {
    write_text(out, body);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MEWL episode toolkit"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate certified episode splits");
  gen_cmd->add_option("--task", gen.task, "all or one task name");
  gen_cmd->add_option("--train", gen.train, "Training episodes per task")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--val", gen.val, "Validation episodes per task")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--test", gen.test, "Test episodes per task")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--seed", gen.seed, "Global seed");
  gen_cmd->add_option("--out", gen.out, "Output directory (default $MEWL_DATA_DIR)");
  gen_cmd->add_option("--config", gen.config, "key=value generation config")->check(CLI::ExistingFile);
  gen_cmd->add_option("--threads", gen.threads, "Worker threads (0 = hardware)");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Answer every episode with an agent");
  solve_cmd->add_option("--in", solve.in, "Episode JSONL");
  solve_cmd->add_option("--agent", solve.agent)->check(CLI::IsMember({"oracle", "random", "ablated"}));
  solve_cmd->add_option("--k", solve.k, "Contexts seen by the ablated agent")->check(CLI::Range(1, kContextCount));
  solve_cmd->add_option("--seed", solve.seed, "Seed for the random agent");
  solve_cmd->add_option("--answers", solve.answers, "Answer JSONL output (default stdout)");

  std::string eval_episodes, eval_answers, eval_format = "table";
  auto* eval_cmd = app.add_subcommand("eval", "Score answer records");
  eval_cmd->add_option("--episodes", eval_episodes, "Episode JSONL");
  eval_cmd->add_option("--answers", eval_answers, "Answer JSONL")->required();
  eval_cmd->add_option("--format", eval_format)->check(CLI::IsMember({"table", "json"}));

  std::string render_episodes, render_out;
  auto* render_cmd = app.add_subcommand("render", "Write SVG panels per episode");
  render_cmd->add_option("--episodes", render_episodes, "Episode JSONL");
  render_cmd->add_option("--out", render_out, "Output directory")->required();

  std::string caption_episodes, caption_style_name = "auto", caption_out;
  auto* caption_cmd = app.add_subcommand("caption", "Write text prompts, one per option");
  caption_cmd->add_option("--episodes", caption_episodes, "Episode JSONL");
  caption_cmd->add_option("--style", caption_style_name, "Caption style (per-task)")->check(CLI::IsMember({"auto"}));
  caption_cmd->add_option("--out", caption_out, "Prompt JSONL output (default stdout)");

  std::string serve_episodes, serve_bind = "127.0.0.1:8080", serve_log;
  std::uint64_t serve_seed = 0;
  auto* serve_cmd = app.add_subcommand("serve", "Run the study HTTP service");
  serve_cmd->add_option("--episodes", serve_episodes, "Episode JSONL");
  serve_cmd->add_option("--bind", serve_bind, "host:port");
  serve_cmd->add_option("--answer-log", serve_log, "Append-only answer log");
  serve_cmd->add_option("--seed", serve_seed, "Session sampling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "mewl: usage error: %s\n", e.what());
    return 2;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*solve_cmd) return run_solve(solve);
    if (*eval_cmd) return run_eval(eval_episodes, eval_answers, eval_format);
    if (*render_cmd) return run_render(render_episodes, render_out);
    if (*caption_cmd) return run_caption(caption_episodes, caption_out);
    if (*serve_cmd) {
      ServiceOptions opts;
      opts.seed = serve_seed;
      if (!serve_log.empty()) opts.answer_log = serve_log;
      auto episodes = read_dataset(serve_episodes.empty() ? default_episodes() : fs::path(serve_episodes));
      std::fprintf(stderr, "serving %zu episodes on %s\n", episodes.size(), serve_bind.c_str());
      serve(std::move(episodes), serve_bind, opts);
      return 0;
    }
  } catch (const PreconditionError& e) {
    std::fprintf(stderr, "mewl: usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "mewl: error: %s\n", e.what());
    return 1;
  }
  return 2;
}
