#pragma once
#include <cstdint>
#include <cstring>
#include <string_view>

namespace floorsep {

// Deterministic, platform-independent RNG. std::mt19937 engines are portable
// but the standard distributions are not, so all draws go through the raw
// 64-bit output here. xoshiro256** seeded through splitmix64.
class Rng {
public:
  explicit Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& si : s_) si = splitmix64(x);
  }

  uint64_t next_u64() {
    uint64_t result = rotl(s_[1] * 5, 7) * 9;
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1).
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform integer in [0, n). Modulo bias is < n/2^64, irrelevant here.
  uint64_t next_below(uint64_t n) { return next_u64() % n; }

  // Box-Muller, primary branch only; one draw costs two uniforms.
  double normal(double mean, double sigma);

  static uint64_t splitmix64(uint64_t& x) {
    uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Derive a named substream seed so one top-level seed drives every stage.
  static uint64_t substream(uint64_t seed, std::string_view name, uint64_t index = 0) {
    uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the name
    for (char c : name) {
      h ^= uint64_t(uint8_t(c));
      h *= 0x100000001b3ULL;
    }
    uint64_t x = seed ^ h;
    uint64_t a = splitmix64(x);
    x ^= index * 0x9e3779b97f4a7c15ULL + 0x1234567;
    return a ^ splitmix64(x);
  }

private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

}  // namespace floorsep
