#pragma once

#include <cstdint>
#include <limits>

namespace sqham {

/// splitmix64 finalizer; also used to derive stream keys.
std::uint64_t mix64(std::uint64_t x);

/// Seeded stream of random draws keyed by (master_seed, stream_id).
///
/// The same key always yields the same sequence, and distinct stream ids give
/// statistically independent streams, so one stream per trial lets trials run
/// on any worker in any order. The engine is xoshiro256** seeded through
/// splitmix64; the helper draws below are defined here rather than through
/// <random> distributions so outputs are identical across standard libraries.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  /// Child stream keyed by this stream's key and `child_id`; does not advance
  /// this stream.
  RngStream substream(std::uint64_t child_id) const;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on {0, ..., bound - 1}; bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p);

  std::uint64_t master_seed() const { return master_; }
  std::uint64_t stream_id() const { return stream_; }

 private:
  std::uint64_t master_;
  std::uint64_t stream_;
  std::uint64_t s_[4];
};

}  // namespace sqham
