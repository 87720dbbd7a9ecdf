#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace membed {

// Deterministic seeded random stream with named substreams. A substream is
// derived purely from the base seed and the tag values, so any (level, copy)
// slice of a larger computation can be rebuilt bit-exactly in isolation.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  Rng Substream(uint64_t a, uint64_t b = 0, uint64_t c = 0) const;

  uint64_t NextU64();
  double Uniform01();                        // uniform in (0, 1]
  double UniformReal(double lo, double hi);  // uniform in [lo, hi)
  int UniformInt(int lo, int hi);            // inclusive bounds
  double Exponential(double mean);           // inverse CDF draw from Exp(mean)

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  std::mt19937_64 gen_;
};

// Inverse-CDF map: -mean * ln(u) for u in (0, 1]. u = 1 gives shift 0.
double ExponentialFromUniform(double u, double mean);

// Per-vertex nonnegative shifts drawn independently from Exp(mean).
struct ShiftVector {
  std::vector<double> delta;
  double mean = 0;
};

ShiftVector SampleShifts(Rng& rng, int n, double mean);

// Redraws the whole vector until every entry is at most 9 * ln(n) * mean.
// The hierarchical constructions condition on that event; resampling turns
// the with-high-probability statement into an invariant. No cap for n = 1.
ShiftVector SampleShiftsCapped(Rng& rng, int n, double mean);

double ShiftCap(int n, double mean);

}  // namespace membed
