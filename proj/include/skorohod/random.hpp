#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace skorohod {

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for a replication stream: the master seed with each coordinate
/// (experiment tag, sample size, replication index, ...) mixed in turn.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys)
{
    std::uint64_t s = mix64(master);
    for (auto k : keys)
    {
        s = mix64(s ^ mix64(k + 0x632be59bd9b4e019ULL));
    }
    return s;
}

/// Portable uniform source. Draws are defined by the 64-bit Mersenne twister
/// and an explicit bit-to-double map, so streams are identical everywhere.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1].
    double uniform_open_closed()
    {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    double standard_exponential() { return -std::log(uniform_open_closed()); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace skorohod
