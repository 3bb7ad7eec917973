#include "adjbai/random.hpp"

namespace adjbai {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

std::mt19937_64 seeded_engine(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t h = splitmix64(a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                      static_cast<std::uint32_t>(splitmix64(h)), static_cast<std::uint32_t>(c),
                      static_cast<std::uint32_t>(c >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

Stream::Stream(std::uint64_t seed) : engine_(seeded_engine(seed, 0, 0)) {}

Stream Stream::derive(std::uint64_t base_seed, std::uint64_t cell_id, std::uint64_t trial_index) {
    Stream s(0);
    s.engine_ = seeded_engine(base_seed, cell_id, trial_index);
    return s;
}

std::uint64_t stable_hash(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace adjbai
