#include "groupmark/random.hpp"

#include <array>

namespace groupmark {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::string_view to_string(Stream stream) {
    switch (stream) {
    case Stream::Population: return "population";
    case Stream::Reflexive: return "reflexive";
    case Stream::Peer: return "peer";
    case Stream::Ranking: return "ranking";
    case Stream::Grouping: return "grouping";
    }
    return "unknown";
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t replicate) {
    return splitmix64(splitmix64(master_seed) ^ (replicate * 0xd1342543de82ef95ULL + 1));
}

Engine make_engine(std::uint64_t seed, Stream stream) {
    const auto tag = static_cast<std::uint32_t>(stream);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag,
                      0x67726d6bU};
    return Engine(seq);
}

} // namespace groupmark
