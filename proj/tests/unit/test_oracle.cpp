#include <doctest.h>

#include "brute_force.hpp"
#include "golden.hpp"
#include "mewl/taskgen.hpp"

using namespace mewl;

TEST_CASE("oracle vocabulary matches the library's names") {
  for (AttributeKind kind : kAttributeKinds) {
    const auto& names = oracle::names_of(kind);
    REQUIRE(static_cast<int>(names.size()) == kind_cardinality(kind));
    for (int i = 0; i < kind_cardinality(kind); ++i) {
      CHECK(AttributeValue(kind, i).name() == names[static_cast<std::size_t>(i)]);
    }
  }
}

TEST_CASE("brute force agrees with the solver") {
  for (Task task : kTasks) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Rng rng(mix_seed(77, task_name(task), seed));
      Episode ep = generate_certified(task, rng).first;
      for (int k : {1, 3, 6}) {
        INFO(task_name(task), " seed=", seed, " k=", k);
        auto bf = oracle::brute_force(ep, k);
        std::span<const Panel> ctx(ep.contexts.data(), static_cast<std::size_t>(k));
        REQUIRE(bf.surviving == consistent_lexicons(task, ctx, episode_delta(ep)));
        REQUIRE(bf.support == evaluate_support(ep, k).per_option_support);
      }
      REQUIRE(oracle::brute_force(ep).answer == ep.answer_index);
    }
  }
}

TEST_CASE("brute force on the pointing episode") {
  auto r = oracle::brute_force(golden::pragmatic_episode());
  CHECK(r.answer == 3);
  CHECK(r.surviving.size() == 1);
}
