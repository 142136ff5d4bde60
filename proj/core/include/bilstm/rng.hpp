#pragma once

#include <cstdint>

namespace bilstm {

// Counter-based splittable generator. A stream is fully determined by
// (root_seed, stream_id): the initial state is a 64-bit mix of the two and
// each draw advances a splitmix64 counter. Identical (root_seed, stream_id,
// draw sequence) yields identical outputs on any platform; distinct stream
// ids give statistically independent streams, which makes per-index
// parallel data generation deterministic.
//
// Gaussian draws use Box-Muller on the uniform stream (both values of each
// pair are consumed). This choice is part of the reproducibility contract
// for statistics produced by this library; exact draws are not expected to
// match other implementations.
class RngStream {
 public:
  explicit RngStream(uint64_t root_seed, uint64_t stream_id = 0);

  uint64_t next_u64();
  double uniform();                        // [0, 1)
  double uniform(double lo, double hi);    // [lo, hi)
  int uniform_int(int n);                  // [0, n), n >= 1
  double gaussian();                       // standard normal

  // Child stream keyed off this stream's id; deterministic in (root, id, key).
  RngStream derived(uint64_t key) const;

  uint64_t root_seed() const { return root_; }
  uint64_t stream_id() const { return id_; }

  static uint64_t mix64(uint64_t z);

 private:
  uint64_t root_ = 0;
  uint64_t id_ = 0;
  uint64_t state_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace bilstm
