#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpomdp {

using Rng = std::mt19937_64;

// One cost dimension per constraint; all arithmetic is elementwise.
using CostVec = std::vector<double>;

// Deterministic, stream-split generator: same (seed, stream) -> same draws,
// distinct streams do not interact.
inline Rng make_stream(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffULL),
                    static_cast<std::uint32_t>(seed >> 32), stream};
  return Rng(seq);
}

inline CostVec zero_costs(std::size_t k) { return CostVec(k, 0.0); }

inline void check_same_length(const CostVec& a, const CostVec& b, const char* what) {
  if (a.size() != b.size())
    throw std::invalid_argument(std::string(what) + ": cost vector length mismatch (" +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                                ")");
}

// x += s * y
inline void add_scaled(CostVec& x, const CostVec& y, double s) {
  check_same_length(x, y, "add_scaled");
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += s * y[i];
}

}  // namespace cpomdp
