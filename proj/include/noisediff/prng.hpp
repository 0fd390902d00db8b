#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace noisediff {

// Seedable 64-bit stream. Each (base_seed, stream_id) pair maps to its own
// Mersenne Twister state through std::seed_seq, so any substream can be
// created directly without advancing another one.
//
// Trial i draws its network initialization (and later its evaluation
// samples) from stream 2i and its training data from stream 2i+1.
class RngStream {
 public:
  RngStream(std::uint64_t base_seed, std::uint64_t stream_id);

  std::uint64_t base_seed() const { return base_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Uniform on [0, 1) with 53 random mantissa bits. One engine call.
  double next_uniform01();

  // Standard normal by Box-Muller. A fresh pair consumes two uniforms; the
  // second value of the pair is cached and returned by the next call.
  double next_gaussian();

 private:
  std::uint64_t base_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::optional<double> cached_gaussian_;
};

inline RngStream seed_stream(std::uint64_t base_seed, std::uint64_t stream_id) {
  return RngStream(base_seed, stream_id);
}

inline std::uint64_t init_stream_id(std::uint64_t trial) { return 2 * trial; }
inline std::uint64_t train_stream_id(std::uint64_t trial) { return 2 * trial + 1; }

}  // namespace noisediff
