#include "bilstm/rng.hpp"

#include <cmath>
#include <numbers>

#include "bilstm/errors.hpp"

namespace bilstm {

namespace {
constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

// 64-bit finalizer (murmur3 variant); full avalanche.
uint64_t RngStream::mix64(uint64_t z) {
  z ^= z >> 33;
  z *= 0xFF51AFD7ED558CCDULL;
  z ^= z >> 33;
  z *= 0xC4CEB9FE1A85EC53ULL;
  z ^= z >> 33;
  return z;
}

RngStream::RngStream(uint64_t root_seed, uint64_t stream_id)
    : root_(root_seed), id_(stream_id) {
  state_ = mix64(mix64(root_seed + kGolden) ^ mix64(stream_id * kGolden + 0x632BE59BD9B4E019ULL));
}

uint64_t RngStream::next_u64() {
  // splitmix64 step
  state_ += kGolden;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int RngStream::uniform_int(int n) {
  if (n <= 0) throw Error::contract("uniform_int needs n >= 1");
  // Rejection-free modulo bias is negligible for the small n used here,
  // but use the unbiased multiply-shift reduction anyway.
  return static_cast<int>((static_cast<unsigned __int128>(next_u64()) *
                           static_cast<unsigned __int128>(n)) >> 64);
}

double RngStream::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 shifted away from zero so log stays finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

RngStream RngStream::derived(uint64_t key) const {
  return RngStream(root_, mix64(id_ * kGolden + key + 1));
}

}  // namespace bilstm
