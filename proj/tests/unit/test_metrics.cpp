#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "phaseswap/metrics.hpp"

using namespace phaseswap;

namespace {

BinaryMask first_n(int w, int h, int n, int offset = 0) {
  BinaryMask m(w, h, 0);
  for (int i = offset; i < offset + n; ++i) m.data()[i] = 1;
  return m;
}

BinaryMask random_mask(int w, int h, std::mt19937_64& gen, double p) {
  std::bernoulli_distribution bit(p);
  BinaryMask m(w, h, 0);
  for (auto& v : m) v = bit(gen) ? 1 : 0;
  return m;
}

constexpr double kEps = kDefaultDiceEpsilon;

}  // namespace

TEST_CASE("identical masks score 1") {
  const auto s = first_n(20, 20, 100);
  CHECK(dsc(s, s) == (200.0 + kEps) / (200.0 + kEps));
  CHECK(dsc(s, s) == 1.0);
}

TEST_CASE("disjoint masks score eps / (|S| + |S'| + eps)") {
  const auto a = first_n(20, 20, 50);
  const auto b = first_n(20, 20, 50, 50);
  CHECK(dsc(a, b) == kEps / (100.0 + kEps));
  CHECK(dsc(a, b) < 1.1e-8);
}

TEST_CASE("half overlap") {
  const auto a = first_n(20, 20, 100);
  const auto b = first_n(20, 20, 100, 50);
  CHECK(dsc(a, b) == (100.0 + kEps) / (200.0 + kEps));
}

TEST_CASE("empty masks score 1") {
  CHECK(dsc(BinaryMask(8, 8, 0), BinaryMask(8, 8, 0)) == 1.0);
}

TEST_CASE("custom epsilon and errors") {
  const auto a = first_n(4, 4, 2);
  const auto b = first_n(4, 4, 2, 2);
  CHECK(dsc(a, b, 0.5) == 0.5 / 4.5);
  CHECK_THROWS_AS(dsc(a, b, 0.0), Error);
  CHECK_THROWS_AS(dsc(a, b, -1.0), Error);
  try {
    dsc(a, BinaryMask(4, 2, 0));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("threshold is strict") {
  RealImage img(2, 2, std::vector<double>{0.5, 0.50001, 0.4, 1.0});
  const auto m = BinaryMask::from_image(img);
  CHECK(m.data()[0] == 0);
  CHECK(m.data()[1] == 1);
  CHECK(m.data()[2] == 0);
  CHECK(m.data()[3] == 1);
  CHECK(m.count() == 2);
}

TEST_CASE("property: symmetry and self-identity on random masks") {
  std::mt19937_64 gen(12);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_mask(16, 12, gen, 0.3);
    const auto b = random_mask(16, 12, gen, 0.3);
    CHECK(dsc(a, b) == dsc(b, a));
    CHECK(dsc(a, a) == 1.0);
    CHECK(dsc(a, b) > 0.0);
    CHECK(dsc(a, b) <= 1.0);
  }
}

TEST_CASE("property: growing the overlap at fixed sizes never lowers the score") {
  // S is fixed at the first 40 pixels; S' slides from disjoint to identical.
  const auto s = first_n(10, 10, 40);
  double previous = 0.0;
  for (int offset = 40; offset >= 0; --offset) {
    const double v = dsc(s, first_n(10, 10, 40, offset));
    CHECK(v >= previous);
    previous = v;
  }
  CHECK(previous == 1.0);
}
