#include <benchmark/benchmark.h>

#include "mewl/caption.hpp"
#include "mewl/harness.hpp"
#include "mewl/render.hpp"
#include "mewl/solver.hpp"
#include "mewl/taskgen.hpp"

using namespace mewl;

namespace {

Task task_at(const benchmark::State& state) { return kTasks[static_cast<std::size_t>(state.range(0))]; }

std::vector<Episode> corpus(Task task, int n) {
  std::vector<Episode> out;
  Rng rng(mix_seed(1, task_name(task), 0));
  for (int i = 0; i < n; ++i) out.push_back(generate_certified(task, rng).first);
  return out;
}

void BM_Generate(benchmark::State& state) {
  Task task = task_at(state);
  Rng rng(42);
  for (auto _ : state) benchmark::DoNotOptimize(generate_certified(task, rng));
  state.SetLabel(std::string(task_name(task)));
}

void BM_Solve(benchmark::State& state) {
  Task task = task_at(state);
  auto eps = corpus(task, 64);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(answer(eps[i++ % eps.size()]));
  state.SetLabel(std::string(task_name(task)));
}

void BM_Prompt(benchmark::State& state) {
  auto eps = corpus(Task::relation, 16);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(build_prompt(eps[i++ % eps.size()], 0));
}

void BM_RenderSvg(benchmark::State& state) {
  auto eps = corpus(Task::number, 16);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(render_svg(eps[i++ % eps.size()].contexts[5].scene));
}

void BM_JsonRoundTrip(benchmark::State& state) {
  auto eps = corpus(Task::bootstrap, 16);
  std::size_t i = 0;
  for (auto _ : state) {
    auto line = episode_to_line(eps[i++ % eps.size()]);
    benchmark::DoNotOptimize(episode_from_json(Json::parse(line)));
  }
}

}  // namespace

BENCHMARK(BM_Generate)->DenseRange(0, 8);
BENCHMARK(BM_Solve)->DenseRange(0, 8);
BENCHMARK(BM_Prompt);
BENCHMARK(BM_RenderSvg);
BENCHMARK(BM_JsonRoundTrip);

BENCHMARK_MAIN();
