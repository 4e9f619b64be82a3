#ifndef DMDOA_RNG_HPP
#define DMDOA_RNG_HPP

#include <cstdint>
#include <random>

namespace dmdoa {

/// splitmix64 step; used to derive independent stream seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master ^ splitmix64(stream));
}

/// Uniform double in [0, 1) from the top 53 bits; avoids distribution
/// implementation differences across standard libraries.
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller, pair-cached.
class GaussianGen {
public:
    explicit GaussianGen(std::uint64_t seed) : eng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01(eng_);
        while (u1 <= 0.0) u1 = uniform01(eng_);
        const double u2 = uniform01(eng_);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace dmdoa

#endif
