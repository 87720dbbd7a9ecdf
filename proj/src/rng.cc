#include "membed/rng.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace membed {

namespace {

// splitmix64 finalizer; good avalanche for seed derivation.
uint64_t Mix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(uint64_t seed) : seed_(seed), gen_(Mix(seed)) {}

Rng Rng::Substream(uint64_t a, uint64_t b, uint64_t c) const {
  uint64_t s = Mix(seed_ ^ Mix(a));
  s = Mix(s ^ Mix(b + 0x517cc1b727220a95ull));
  s = Mix(s ^ Mix(c + 0x2545f4914f6cdd1dull));
  return Rng(s);
}

uint64_t Rng::NextU64() { return gen_(); }

double Rng::Uniform01() {
  // 53 random bits mapped to (0, 1]; the +1 excludes zero so logs are finite.
  return static_cast<double>((NextU64() >> 11) + 1) * 0x1.0p-53;
}

double Rng::UniformReal(double lo, double hi) {
  return lo + (hi - lo) * (1.0 - Uniform01());
}

int Rng::UniformInt(int lo, int hi) {
  uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(NextU64() % span);
}

double Rng::Exponential(double mean) {
  if (!(mean > 0)) throw std::invalid_argument("exponential mean must be positive");
  return ExponentialFromUniform(Uniform01(), mean);
}

double ExponentialFromUniform(double u, double mean) {
  return 0.0 - mean * std::log(u);
}

ShiftVector SampleShifts(Rng& rng, int n, double mean) {
  if (!(mean > 0)) throw std::invalid_argument("shift scale must be positive");
  ShiftVector s;
  s.mean = mean;
  s.delta.reserve(n);
  for (int i = 0; i < n; ++i) s.delta.push_back(rng.Exponential(mean));
  return s;
}

double ShiftCap(int n, double mean) { return 9.0 * std::log(static_cast<double>(n)) * mean; }

ShiftVector SampleShiftsCapped(Rng& rng, int n, double mean) {
  if (n <= 1) return SampleShifts(rng, n, mean);
  const double cap = ShiftCap(n, mean);
  for (int attempt = 0; attempt < 64; ++attempt) {
    ShiftVector s = SampleShifts(rng, n, mean);
    if (*std::max_element(s.delta.begin(), s.delta.end()) <= cap) return s;
  }
  // P(one failure) <= n^-8; reaching this line means a broken generator.
  throw std::runtime_error("shift resampling budget exhausted");
}

}  // namespace membed
