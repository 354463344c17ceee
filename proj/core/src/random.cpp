#include "ridge/random.hpp"

#include <cmath>
#include <numbers>

namespace ridge {

namespace {

constexpr std::uint32_t kMultiplier0 = 0xD2511F53;
constexpr std::uint32_t kMultiplier1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
constexpr int kRounds = 10;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}

// (0, 1) with 53 random bits; never returns 0 so log() is safe.
inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) noexcept {
  for (int round = 0; round < kRounds; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kMultiplier0, ctr[0], lo0, hi0);
    mulhilo(kMultiplier1, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Philox4x32::Counter SampleStream::block_counter(std::uint64_t block) const noexcept {
  return {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
          static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)};
}

Philox4x32::Key SampleStream::key() const noexcept {
  return {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
}

void SampleStream::fill_from(std::uint64_t first_block, std::span<double> out) const noexcept {
  const auto k = key();
  std::size_t i = 0;
  for (std::uint64_t block = first_block; i < out.size(); ++block) {
    const auto word = Philox4x32::generate(block_counter(block), k);
    const double u1 = to_unit(word[1], word[0]);
    const double u2 = to_unit(word[3], word[2]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out[i++] = radius * std::cos(angle);
    if (i < out.size()) out[i++] = radius * std::sin(angle);
  }
}

void SampleStream::normals(std::span<double> out) noexcept {
  fill_from(counter_, out);
  counter_ += blocks_per_vector(out.size());
}

void SampleStream::normals_at(std::uint64_t index, std::span<double> out) const noexcept {
  fill_from(counter_ + index * blocks_per_vector(out.size()), out);
}

double SampleStream::uniform() noexcept {
  const auto word = Philox4x32::generate(block_counter(counter_), key());
  ++counter_;
  return to_unit(word[1], word[0]);
}

void SampleStream::skip_vectors(std::uint64_t count, std::size_t size) noexcept {
  counter_ += count * blocks_per_vector(size);
}

SampleStream SampleStream::substream(std::uint64_t index) const noexcept {
  return SampleStream(seed_, mix64(stream_id_ ^ mix64(index + 1)), 0);
}

}  // namespace ridge
