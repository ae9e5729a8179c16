#include "fluctsim/rng.hpp"

#include <cmath>

namespace fluctsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

CounterRng CounterRng::split(std::uint64_t substream) const {
    return CounterRng(splitmix64(seed_ ^ 0xa076'1d64'78bd'642fULL),
                      splitmix64(stream_ * 0x1000'0000'0000'0061ULL + substream + 1));
}

std::uint64_t CounterRng::next_u64() {
    const std::uint64_t mixed = splitmix64(seed_ ^ splitmix64(stream_ ^ splitmix64(counter_)));
    ++counter_;
    return mixed;
}

double CounterRng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

double CounterRng::normal() {
    double u1 = next_double();
    while (u1 == 0.0) u1 = next_double();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace fluctsim
