#ifndef BDQM_RNG_HPP
#define BDQM_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace bdqm {

// splitmix64 step; used to derive independent per-sample seeds so that
// parallel loops stay deterministic regardless of scheduling.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double gauss() { return normal_(gen_); }
    double uniform() { return unif_(gen_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return std::uniform_int_distribution<int>(lo, hi)(gen_);
    }
    std::complex<double> cgauss() {
        return {normal_(gen_) / std::sqrt(2.0), normal_(gen_) / std::sqrt(2.0)};
    }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

}  // namespace bdqm

#endif
