#pragma once

#include <cstdint>
#include <random>

namespace hetprobit {

/// Seedable random stream with explicit stream splitting.
///
/// Identical (seed, stream_id) pairs reproduce the exact same variate
/// sequence; distinct stream ids give statistically independent streams.
/// Parallel work (replications, chains, groups) is assigned one stream each
/// and never shares a stream across workers.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Raw engine output.
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform draw on the open interval (0, 1).
  double uniform();

  /// Standard normal draw by quantile inversion (consumes one uniform).
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace hetprobit
