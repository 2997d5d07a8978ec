#include "latcount/rng.hpp"

#include <cmath>

namespace latcount {

double rng_gauss(uint64_t seed, uint64_t stream, uint64_t counter) {
    double u1 = rng_unit_open(seed, stream, 2 * counter);
    double u2 = rng_unit(seed, stream, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace latcount
