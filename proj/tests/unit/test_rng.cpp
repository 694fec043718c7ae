#include <doctest.h>

#include <map>

#include "mewl/rng.hpp"

using namespace mewl;

TEST_CASE("rng is reproducible") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("bounded draws stay in range and cover it") {
  Rng rng(1);
  std::map<std::uint64_t, int> hist;
  for (int i = 0; i < 50000; ++i) {
    auto v = rng.below(5);
    REQUIRE(v < 5);
    ++hist[v];
  }
  for (auto& [v, n] : hist) CHECK(n == doctest::Approx(10000).epsilon(0.05));
  for (int i = 0; i < 1000; ++i) {
    int v = rng.uniform_int(-3, 3);
    REQUIRE(v >= -3);
    REQUIRE(v <= 3);
    double u = rng.unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("sample_indices returns distinct indices") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    auto idx = rng.sample_indices(10, 4);
    REQUIRE(idx.size() == 4);
    std::sort(idx.begin(), idx.end());
    CHECK(std::adjacent_find(idx.begin(), idx.end()) == idx.end());
    CHECK(idx.back() < 10);
  }
}

TEST_CASE("seed mixing separates tags and indices") {
  CHECK(mix_seed(0, "test/number", 1) != mix_seed(0, "test/number", 2));
  CHECK(mix_seed(0, "test/number", 1) != mix_seed(0, "val/number", 1));
  CHECK(mix_seed(0, "test/number", 1) != mix_seed(1, "test/number", 1));
  CHECK(mix_seed(5, "x", 9) == mix_seed(5, "x", 9));
}
