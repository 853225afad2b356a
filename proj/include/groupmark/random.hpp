#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace groupmark {

using Engine = std::mt19937_64;

/// Named substreams. Each noise source draws from its own engine so that
/// changing one source never shifts the draws of another.
enum class Stream : std::uint32_t {
    Population = 1,
    Reflexive = 2,
    Peer = 3,
    Ranking = 4,
    Grouping = 5,
};

std::string_view to_string(Stream stream);

/// Seed for replicate `replicate` of an experiment driven by `master_seed`.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t replicate);

/// Engine for one named substream of a seed.
Engine make_engine(std::uint64_t seed, Stream stream);

} // namespace groupmark
