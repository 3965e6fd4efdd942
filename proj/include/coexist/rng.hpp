#pragma once

#include <cstdint>

namespace coexist {

// Named sub-streams of the master seed. Each (master, index, stream) triple
// yields an independent deterministic sequence, so run order and worker count
// never change what a run draws.
enum class Stream : std::uint64_t {
    Topology = 1,
    Arrivals = 2,
    UserPick = 3,
    Instance = 4,
    PrefNoise = 5,
};

// SplitMix64-based generator. Hand-rolled instead of <random> distributions
// because their output is implementation-defined and the result CSVs must be
// reproducible bit-for-bit.
class Rng {
  public:
    Rng(std::uint64_t master, std::uint64_t index, Stream stream);
    explicit Rng(std::uint64_t raw_seed) : state_(raw_seed) {}

    std::uint64_t next_u64();
    double next_double();  // uniform [0, 1)
    double uniform(double lo, double hi);
    std::uint64_t next_below(std::uint64_t n);  // uniform over {0, ..., n-1}
    int poisson(double mean);

  private:
    std::uint64_t state_;
};

}  // namespace coexist
