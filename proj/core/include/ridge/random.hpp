#pragma once

// Counter-based random numbers. A draw is a pure function of
// (seed, stream_id, counter), so any worker can generate any draw without
// coordination and results never depend on scheduling.

#include <array>
#include <cstdint>
#include <span>

namespace ridge {

/// Philox4x32 with 10 rounds.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key) noexcept;
};

/// SplitMix64 finalizer; used to derive child stream ids.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Position in a reproducible stream of standard normals. Each Philox block
/// yields one Box-Muller pair; a vector draw of size n consumes ceil(n/2)
/// blocks and always starts on a block boundary.
class SampleStream {
 public:
  constexpr SampleStream() = default;
  constexpr SampleStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t counter = 0)
      : seed_(seed), stream_id_(stream_id), counter_(counter) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t counter() const noexcept { return counter_; }

  /// Fills `out` with independent N(0,1) values and advances the counter.
  void normals(std::span<double> out) noexcept;

  /// Same values `normals` would produce for a vector of `out.size()` after
  /// `index` prior vector draws of the same size, without touching the state.
  void normals_at(std::uint64_t index, std::span<double> out) const noexcept;

  /// Uniform in (0, 1), 53-bit resolution. Advances by one block.
  double uniform() noexcept;

  void skip_vectors(std::uint64_t count, std::size_t size) noexcept;

  /// Independent stream sharing this seed.
  SampleStream substream(std::uint64_t index) const noexcept;

  static constexpr std::uint64_t blocks_per_vector(std::size_t size) noexcept {
    return (static_cast<std::uint64_t>(size) + 1) / 2;
  }

 private:
  Philox4x32::Counter block_counter(std::uint64_t block) const noexcept;
  Philox4x32::Key key() const noexcept;
  void fill_from(std::uint64_t first_block, std::span<double> out) const noexcept;

  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace ridge
