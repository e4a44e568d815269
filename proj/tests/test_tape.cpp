#include <doctest.h>

#include <array>
#include <set>
#include <vector>

#include "lasat/errors.hpp"
#include "lasat/tape.hpp"

using namespace lasat;

TEST_CASE("u01 is deterministic and in range") {
  seed s = seed::from_u64(42);
  for (int i = 0; i < 1000; ++i) {
    stream_key k = stream_key::lb_sample(-i);
    double a = u01(s, k);
    double b = u01(s, k);
    CHECK(a == b);
    CHECK(a >= 0.0);
    CHECK(a < 1.0);
  }
}

TEST_CASE("bit thresholds u01 at one half") {
  seed s = seed::from_u64(7);
  for (int i = 0; i < 1000; ++i) {
    stream_key k = stream_key::mark_phase1(i);
    CHECK(bit(s, k) == (u01(s, k) >= 0.5 ? 1 : 0));
  }
}

TEST_CASE("u01 mean over distinct keys") {
  seed s = seed::from_u64(99);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += u01(s, stream_key::padding_draw(-i));
  double mean = sum / n;
  CHECK(mean > 0.49);
  CHECK(mean < 0.51);
}

TEST_CASE("bit frequency over distinct keys") {
  seed s = seed::from_u64(123);
  long long ones = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) ones += bit(s, stream_key::init_y(i));
  double f = double(ones) / n;
  CHECK(f > 0.49);
  CHECK(f < 0.51);
}

TEST_CASE("distinct (namespace, indices) tuples never collide at the byte level") {
  std::set<std::array<std::uint8_t, 17>> bytes;
  std::size_t count = 0;
  for (int ns = 1; ns <= 8; ++ns)
    for (int a = -3; a <= 3; ++a)
      for (int b = 0; b <= 2; ++b) {
        bytes.insert(stream_key{static_cast<stream_ns>(ns), a, b}.serialize());
        ++count;
      }
  CHECK(bytes.size() == count);
}

TEST_CASE("negative time indices get distinct draws") {
  seed s = seed::from_u64(5);
  CHECK(u01(s, stream_key::lb_sample(-1)) != u01(s, stream_key::lb_sample(1)));
  CHECK(u01(s, stream_key::lb_sample(-100)) != u01(s, stream_key::lb_sample(-101)));
}

TEST_CASE("seed hex round trip") {
  seed s = seed::from_u64(0xDEADBEEF);
  seed t = seed::from_hex(s.to_hex());
  CHECK(s == t);
  CHECK_THROWS_AS(seed::from_hex("abc"), error);
  CHECK_THROWS_AS(seed::from_hex(std::string(64, 'z')), error);
}

TEST_CASE("different seeds decorrelate the tape") {
  seed a = seed::from_u64(1), b = seed::from_u64(2);
  int agree = 0;
  for (int i = 0; i < 1000; ++i)
    if (bit(a, stream_key::init_y(i)) == bit(b, stream_key::init_y(i))) ++agree;
  CHECK(agree > 400);
  CHECK(agree < 600);
}
