#pragma once

#include <cstdint>

namespace tritail {

// Counter-based random numbers: every draw is a keyed hash of
// (seed, stream, counter), so any consumer can be evaluated in any order,
// on any thread, and still see the same value. All simulation code draws
// through these helpers; nothing keeps generator state.

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

// Four mixing rounds over the key words. The per-word additive constants
// keep (seed, stream, hi, lo) permutations from colliding.
inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t hi, std::uint64_t lo) {
  std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ull);
  h = mix64(h ^ (stream + 0x6a09e667f3bcc909ull));
  h = mix64(h ^ (hi + 0xbb67ae8584caa73bull));
  h = mix64(h ^ (lo + 0x3c6ef372fe94f82bull));
  return h;
}

// named sub-streams so independent uses of one seed never overlap
enum class Stream : std::uint64_t {
  weights = 1,       // i.i.d. weight draws, counters (vector_id, index)
  edges = 2,         // pair coins, counters (min(i,j), max(i,j))
  replications = 3,  // per-replication derived seeds
  hub = 4,           // conditional tail draws for planted/tilted hubs
  proposal = 5,      // importance-sampling proposals
  uniforms = 6,      // generic uniform arrays (empirical-process trials)
};

// uniform on [0, 1), 53 random bits
inline double u01(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

// uniform on (0, 1]; safe to feed into inverse-power transforms
inline double u01_positive(std::uint64_t h) { return 1.0 - u01(h); }

inline double uniform_draw(std::uint64_t seed, Stream s, std::uint64_t hi, std::uint64_t lo) {
  return u01(counter_hash(seed, static_cast<std::uint64_t>(s), hi, lo));
}

inline double uniform_draw_positive(std::uint64_t seed, Stream s, std::uint64_t hi,
                                    std::uint64_t lo) {
  return u01_positive(counter_hash(seed, static_cast<std::uint64_t>(s), hi, lo));
}

// derived seed for replication r of a run with the given master seed
inline std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t rep) {
  return counter_hash(master_seed, static_cast<std::uint64_t>(Stream::replications), rep, 0);
}

}  // namespace tritail
