#pragma once

#include <cstdint>
#include <random>

namespace mirl {

/// Engine used for every random stream in the library.
using Engine = std::mt19937_64;

/// Independent stream for (seed, stream_id, index). Streams are keyed by
/// value, not by draw order, so any scheduling of workers reproduces the
/// same numbers.
inline Engine make_stream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Engine(seq);
}

// Stream identifiers. Distinct ids keep e.g. episode 7 of the forward
// learner and step 7 of the outer chain from sharing a stream.
inline constexpr std::uint64_t kEpisodeStream = 0x45504953ULL;   // "EPIS"
inline constexpr std::uint64_t kChainStream = 0x4348414eULL;     // "CHAN"
inline constexpr std::uint64_t kResampleStream = 0x52534d50ULL;  // "RSMP"

}  // namespace mirl
