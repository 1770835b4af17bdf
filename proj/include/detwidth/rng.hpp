#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace detwidth {

// (master_seed, stream_id) names one reproducible random stream.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  // Child stream for task `index` (e.g. one Monte-Carlo sample). Pure function
  // of (this, index).
  SeedSpec substream(std::uint64_t index) const noexcept;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) noexcept;

// Counter-based generator: the key is the master seed, the upper 64 counter
// bits are the stream id and the lower 64 bits count blocks. Draws therefore
// depend only on (SeedSpec, draw index), never on scheduling.
class CounterRng {
 public:
  explicit CounterRng(const SeedSpec& seed) noexcept;

  std::uint32_t next_u32() noexcept {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }
  std::uint64_t next_u64() noexcept {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }
  // Uniform on (0, 1); never returns 0 or 1.
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }
  double normal() noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Sampler for P(w = k) = (1 - q) q^k, k = 0, 1, ... by inversion.
class GeometricSampler {
 public:
  explicit GeometricSampler(double q);
  double q() const noexcept { return q_; }

  std::uint32_t operator()(CounterRng& rng) const noexcept {
    return static_cast<std::uint32_t>(std::log(rng.uniform()) * inv_log_q_);
  }

 private:
  double q_;
  double inv_log_q_;
};

}  // namespace detwidth
