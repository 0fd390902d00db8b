#include "noisediff/prng.hpp"

#include <cmath>
#include <numbers>

namespace noisediff {

namespace {

std::mt19937_64 make_engine(std::uint64_t base_seed, std::uint64_t stream_id) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(base_seed & 0xffffffffu),
      static_cast<std::uint32_t>(base_seed >> 32),
      static_cast<std::uint32_t>(stream_id & 0xffffffffu),
      static_cast<std::uint32_t>(stream_id >> 32),
      0x6e6f6973u,  // domain tag
  };
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t base_seed, std::uint64_t stream_id)
    : base_seed_(base_seed),
      stream_id_(stream_id),
      engine_(make_engine(base_seed, stream_id)) {}

double RngStream::next_uniform01() {
  // std::uniform_real_distribution is implementation-defined; this is not.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::next_gaussian() {
  if (cached_gaussian_) {
    double z = *cached_gaussian_;
    cached_gaussian_.reset();
    return z;
  }
  const double u1 = 1.0 - next_uniform01();  // (0, 1], keeps log finite
  const double u2 = next_uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_gaussian_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

}  // namespace noisediff
