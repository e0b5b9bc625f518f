#include "fracpen/grunwald.hpp"

#include <string>

#include "fracpen/errors.hpp"

namespace fracpen {

GrunwaldSequence::GrunwaldSequence(double alpha, std::size_t count) : alpha_(alpha)
{
    if (!(alpha > 1.0 && alpha < 2.0)) {
        throw ParameterError("grunwald: alpha must lie in (1,2), got " + std::to_string(alpha));
    }
    if (count < 2) {
        throw ParameterError("grunwald: need at least 2 coefficients");
    }
    coeffs_.resize(count);
    coeffs_[0] = 1.0;
    for (std::size_t l = 1; l < count; ++l) {
        coeffs_[l] = (1.0 - (alpha + 1.0) / static_cast<double>(l)) * coeffs_[l - 1];
    }
}

GrunwaldSequence grunwald_coeffs(double alpha, std::size_t count)
{
    return GrunwaldSequence(alpha, count);
}

}  // namespace fracpen
