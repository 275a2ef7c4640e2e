#include "jass/rng.hpp"

#include <cmath>

namespace jass {

std::complex<double> RandomStream::next_cn() noexcept {
    // |z|^2 ~ Exp(1), phase uniform. Using 1-u keeps the log argument in
    // (2^-53, 1], so the magnitude is always finite.
    double u1 = next_double();
    double u2 = next_double();
    double r = std::sqrt(-std::log(1.0 - u1));
    double phi = 2.0 * M_PI * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

} // namespace jass
