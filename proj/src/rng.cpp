#include "coexist/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace coexist {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t mix_key(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t s = a;
    splitmix64(s);
    s ^= b * 0xff51afd7ed558ccdull;
    splitmix64(s);
    s ^= c * 0xc4ceb9fe1a85ec53ull;
    splitmix64(s);
    return s;
}

}  // namespace

Rng::Rng(std::uint64_t master, std::uint64_t index, Stream stream)
    : state_(mix_key(master, index, static_cast<std::uint64_t>(stream))) {}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

std::uint64_t Rng::next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_below: n must be positive");
    // Multiply-shift; bias is < 2^-53 for the small n used here.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

int Rng::poisson(double mean) {
    if (mean < 0.0) throw std::invalid_argument("poisson: mean must be >= 0");
    if (mean == 0.0) return 0;
    // Knuth's product method, chunked via Poisson additivity so the uniform
    // product never underflows for large means.
    auto chunk = [this](double m) {
        const double limit = std::exp(-m);
        int k = 0;
        double prod = next_double();
        while (prod > limit) {
            ++k;
            prod *= next_double();
        }
        return k;
    };
    int total = 0;
    double remaining = mean;
    while (remaining > 30.0) {
        total += chunk(30.0);
        remaining -= 30.0;
    }
    total += chunk(remaining);
    return total;
}

}  // namespace coexist
