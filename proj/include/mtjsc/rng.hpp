#pragma once

#include <cstdint>
#include <random>

namespace mtjsc {

// Stream salts keep independent uses of one (seed, id) pair apart.
enum class StreamSalt : std::uint64_t {
    Switching = 0x5157'4954'4348ULL,
    Variation = 0x5641'5249'4154ULL,
    Readings = 0x5245'4144'494eULL,
    Experiment = 0x4558'5045'5249ULL,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives a child seed that depends on every argument; used so that each
// device, experiment repeat and grid cell owns its own stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t id,
                                 StreamSalt salt = StreamSalt::Switching) {
    return splitmix64(splitmix64(master ^ static_cast<std::uint64_t>(salt)) + id);
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t master, std::uint64_t id,
                          StreamSalt salt = StreamSalt::Switching) {
    return Engine(derive_seed(master, id, salt));
}

}  // namespace mtjsc
