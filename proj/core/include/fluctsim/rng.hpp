#ifndef FLUCTSIM_RNG_HPP
#define FLUCTSIM_RNG_HPP

#include <cstdint>

namespace fluctsim {

/* Counter-based splittable generator (splitmix64 over a keyed counter).
 * Draws are a pure function of (seed, stream, counter), so parallel fan-out
 * over streams never changes the numbers. */
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    // Independent substream; child draws never collide with the parent's.
    CounterRng split(std::uint64_t substream) const;

    std::uint64_t next_u64();
    // uniform in [0, 1)
    double next_double();
    // uniform in [lo, hi)
    double uniform(double lo, double hi);
    // standard normal (Box-Muller)
    double normal();

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

} // namespace fluctsim

#endif
