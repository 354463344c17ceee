#include "ridge/random.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

using namespace ridge;

TEST_SUITE("random") {

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}) ==
        C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::generate(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                             K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                             K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("same seed and stream reproduce bitwise") {
  SampleStream a(42, 3);
  SampleStream b(42, 3);
  std::vector<double> x(1001);
  std::vector<double> y(1001);
  a.normals(x);
  b.normals(y);
  CHECK(x == y);
  CHECK(a.counter() == b.counter());
}

TEST_CASE("different streams and seeds differ") {
  std::vector<double> x(8);
  std::vector<double> y(8);
  std::vector<double> z(8);
  SampleStream(1, 0).normals_at(0, x);
  SampleStream(1, 1).normals_at(0, y);
  SampleStream(2, 0).normals_at(0, z);
  CHECK(x != y);
  CHECK(x != z);
}

TEST_CASE("normals_at matches sequential draws") {
  SampleStream s(9, 4);
  const SampleStream origin = s;
  for (std::uint64_t k = 0; k < 20; ++k) {
    std::vector<double> seq(7);
    std::vector<double> direct(7);
    s.normals(seq);
    origin.normals_at(k, direct);
    CHECK(seq == direct);
  }
  SampleStream skipped = origin;
  skipped.skip_vectors(20, 7);
  CHECK(skipped.counter() == s.counter());
}

TEST_CASE("vector draws start on a block boundary") {
  CHECK(SampleStream::blocks_per_vector(1) == 1);
  CHECK(SampleStream::blocks_per_vector(2) == 1);
  CHECK(SampleStream::blocks_per_vector(3) == 2);
  SampleStream s(1, 1);
  std::vector<double> odd(3);
  s.normals(odd);
  CHECK(s.counter() == 2);
}

TEST_CASE("standard normal moments") {
  SampleStream s(123, 0);
  const int n = 200000;
  std::vector<double> v(n);
  s.normals(v);
  double mean = 0.0;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : v) {
    mean += x;
    m2 += x * x;
    m4 += x * x * x * x;
  }
  mean /= n;
  m2 /= n;
  m4 /= n;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(n));
  CHECK(std::abs(m2 - 1.0) < 4.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(m4 - 3.0) < 4.0 * std::sqrt(96.0 / n));
}

TEST_CASE("uniform draws lie in the open unit interval") {
  SampleStream s(5, 5);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / 10000 - 0.5) < 0.02);
}

TEST_CASE("substreams are distinct and reproducible") {
  const SampleStream root(77, 0);
  std::set<std::uint64_t> ids;
  for (std::uint64_t i = 0; i < 1000; ++i) ids.insert(root.substream(i).stream_id());
  CHECK(ids.size() == 1000);
  CHECK(root.substream(5).stream_id() == SampleStream(77, 0).substream(5).stream_id());
  CHECK(root.substream(5).counter() == 0);
  CHECK(root.substream(5).seed() == 77);
}

}  // TEST_SUITE
