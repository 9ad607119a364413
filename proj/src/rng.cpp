#include "hetprobit/rng.hpp"

#include "hetprobit/normal.hpp"

namespace hetprobit {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  // Feed all 128 bits of (seed, stream_id) through seed_seq so nearby ids
  // land far apart in state space.
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id & 0xffffffffu),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  engine_.seed(seq);
}

double RngStream::uniform() {
  // 53-bit mantissa shifted into (0, 1): never returns an endpoint, so
  // log(u) and quantile transforms stay finite.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() { return std_normal_quantile(uniform()); }

}  // namespace hetprobit
