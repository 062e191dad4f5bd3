#ifndef DTLAB_RNG_HPP
#define DTLAB_RNG_HPP

#include <cstdint>
#include <random>

namespace dtlab {

// One step of the splitmix64 generator; also used to derive independent
// per-task seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic random source. All sampling in the library goes through this
// wrapper so that results depend only on the seed, not on library internals
// such as std::uniform_real_distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in {lo, ..., hi} via rejection-free scaling (the ranges
  // used here are tiny, so the modulo bias of the naive approach would still
  // be negligible; the multiply-shift keeps it exact enough for our sizes).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Independent stream for task `task_id` under a master seed. Streams for
// different ids are decorrelated by hashing both words through splitmix64.
inline Rng task_rng(std::uint64_t master_seed, std::uint64_t task_id) {
  std::uint64_t s = master_seed;
  std::uint64_t a = splitmix64(s);
  s ^= 0x9e3779b97f4a7c15ULL * (task_id + 1);
  std::uint64_t b = splitmix64(s);
  return Rng(a ^ (b + 0x632be59bd9b4e019ULL * task_id));
}

}  // namespace dtlab

#endif
