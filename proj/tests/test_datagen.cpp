#include <cmath>

#include "doctest.h"
#include "episodic/datagen.hpp"
#include "episodic/fsm.hpp"
#include "episodic/oracle.hpp"

using namespace episodic;

TEST_CASE("generation is bit-reproducible under a fixed seed") {
  GenConfig cfg;
  cfg.neurons = 1;
  cfg.duration_s = 1'000'000;
  cfg.base_rate_hz = 1.0;
  cfg.seed = 99;
  GenResult a = generate(cfg);
  GenResult b = generate(cfg);
  REQUIRE(a.stream.size() == b.stream.size());
  CHECK(a.stream.types() == b.stream.types());
  CHECK(a.stream.times() == b.stream.times());
}

TEST_CASE("zero duration yields an empty stream") {
  GenConfig cfg;
  cfg.duration_s = 0;
  CHECK(generate(cfg).stream.size() == 0);
}

TEST_CASE("background volume sits within four sigma of the Poisson mean") {
  GenConfig cfg;
  cfg.neurons = 64;
  cfg.duration_s = 100;
  cfg.base_rate_hz = 20;
  cfg.seed = 2024;
  GenResult data = generate(cfg);
  double mean = 64.0 * 20.0 * 100.0;
  double sigma = std::sqrt(mean);
  CHECK(data.stream.size() > mean - 4 * sigma);
  CHECK(data.stream.size() < mean + 4 * sigma);
}

TEST_CASE("streams are sorted with ties ordered by neuron id") {
  GenConfig cfg;
  cfg.neurons = 16;
  cfg.duration_s = 30;
  cfg.base_rate_hz = 50;
  cfg.seed = 5;
  GenResult data = generate(cfg);
  for (std::size_t i = 1; i < data.stream.size(); ++i) {
    CHECK(data.stream.time_at(i - 1) <= data.stream.time_at(i));
    if (data.stream.time_at(i - 1) == data.stream.time_at(i))
      CHECK(data.stream.type_at(i - 1) <= data.stream.type_at(i));
  }
}

TEST_CASE("every logged injection is a valid occurrence in the stream") {
  GenConfig cfg;
  cfg.neurons = 8;
  cfg.duration_s = 20;
  cfg.base_rate_hz = 10;
  cfg.seed = 17;
  Episode ep{{0, 1, 2, 3}, {{5, 10}, {5, 10}, {0, 6}}};
  cfg.embedded.push_back({ep, 2.0});
  GenResult data = generate(cfg);
  REQUIRE(data.injections.size() == 1);
  CHECK(!data.injections[0].empty());
  for (const auto& occ : data.injections[0]) CHECK(has_occurrence(data.stream, ep, occ));
}

TEST_CASE("counting an embedded episode recovers at least the injected schedule") {
  GenConfig cfg;
  cfg.neurons = 12;
  cfg.duration_s = 50;
  cfg.base_rate_hz = 15;
  cfg.seed = 31;
  Episode ep{{2, 7, 4}, {{5, 10}, {5, 10}}};
  cfg.embedded.push_back({ep, 1.0});
  GenResult data = generate(cfg);
  std::uint64_t injected = max_nonoverlap(data.injections[0]);
  CHECK(injected > 0);
  CHECK(count_fsm(data.stream, ep) >= injected);
}

TEST_CASE("invalid configurations are rejected") {
  GenConfig cfg;
  cfg.base_rate_hz = 0;
  CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
  cfg.base_rate_hz = 10;
  cfg.neurons = 2;
  cfg.embedded.push_back({Episode{{0, 5}, {{5, 10}}}, 1.0});
  CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
}
