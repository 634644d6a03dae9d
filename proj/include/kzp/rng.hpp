#pragma once

#include <cstdint>
#include <random>

namespace kzp {

// mt19937_64 output is fixed by the standard, and the reduction below avoids
// distribution classes whose output differs between standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next() { return eng_(); }

  // Uniform integer in [0, bound).
  uint64_t below(uint64_t bound) {
    if (bound <= 1) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % bound;
  }

  // Derive an independent stream for a labelled sub-task.
  Rng fork(uint64_t label) {
    uint64_t z = eng_() ^ (label + 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace kzp
