#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace icpo {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Deterministic per-(seed, step, group) stream id.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t step,
                                 std::uint64_t group) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ (step + 0xD1B54A32D192ED03ull));
  s = splitmix64(s ^ (group + 0x8CB92BA72F3D8DD7ull));
  return s;
}

// mt19937_64 plus hand-rolled draws: std::uniform_real_distribution and
// std::discrete_distribution are not bit-portable across standard libraries,
// and reproducibility here is byte-checked.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // CDF-walk categorical draw over an explicit probability vector.
  int categorical(const std::vector<double>& probs) {
    double u = uniform();
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      cum += probs[i];
      if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace icpo
