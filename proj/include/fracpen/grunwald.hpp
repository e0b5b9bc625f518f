#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracpen {

/// Shifted Grünwald-Letnikov weights g_0..g_{L} for one order alpha in (1,2).
///
/// g_0 = 1 and g_l = (1 - (alpha+1)/l) g_{l-1}. For alpha in (1,2) the sequence
/// has g_1 = -alpha, a strictly positive strictly decreasing tail from l = 2,
/// and strictly negative partial sums from n = 1 on. Immutable once built.
class GrunwaldSequence {
public:
    GrunwaldSequence(double alpha, std::size_t count);

    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] std::size_t size() const noexcept { return coeffs_.size(); }
    [[nodiscard]] double operator[](std::size_t l) const { return coeffs_[l]; }
    [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }

private:
    double alpha_;
    std::vector<double> coeffs_;
};

/// Builds g_0..g_{count-1}. Throws ParameterError unless 1 < alpha < 2 and count >= 2.
[[nodiscard]] GrunwaldSequence grunwald_coeffs(double alpha, std::size_t count);

}  // namespace fracpen
