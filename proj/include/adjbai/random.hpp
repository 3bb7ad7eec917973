#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace adjbai {

/// SplitMix64 finalizer; used to hash seed tuples into engine seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// An exclusively owned random stream. Streams are derived from a
/// (base_seed, cell_id, trial_index) tuple by hashing the tuple through
/// SplitMix64 into the seed sequence of a 64-bit Mersenne Twister.
class Stream {
public:
    static constexpr const char* kGenerator = "mt19937_64 seeded by splitmix64(base_seed, cell_id, trial_index)";

    explicit Stream(std::uint64_t seed);
    static Stream derive(std::uint64_t base_seed, std::uint64_t cell_id, std::uint64_t trial_index);

    double normal() { return normal_(engine_); }
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_); }
    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

/// Stable 64-bit identifier for a string (FNV-1a), used for cell ids.
std::uint64_t stable_hash(const std::string& s);

}  // namespace adjbai
