#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "noisediff/mlp.hpp"
#include "noisediff/prng.hpp"

namespace noisediff {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Random parameters (biases included) and a batch of `size` samples with
// every hidden pre-activation at least 1e-4 away from the ReLU kink.
struct GradCheckCase {
  MlpParams params;
  TrainBatch batch;
};
GradCheckCase random_grad_check_case(RngStream& g, std::size_t size = 16);

// Sampler moments, finite-difference gradient check and oracle-chain
// properties, one entry per property.
std::vector<CheckResult> run_selftest(std::uint64_t seed);

}  // namespace noisediff
