#pragma once

#include <Eigen/Dense>

#include "fracpen/discretization.hpp"
#include "fracpen/precond.hpp"

namespace fracpen {

struct SpectrumBounds {
    double min = 0.0;
    double max = 0.0;
};

/// Extreme eigenvalues of B^{-1} A for symmetric A and symmetric positive definite B.
[[nodiscard]] SpectrumBounds generalized_bounds(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Dense spectral diagnostics of one configuration (all dense, size-capped).
struct SpectralReport {
    SpectrumBounds tau_inv_a;  // eig(tau_1(A)^{-1} A)
    SpectrumBounds p_inv_m;    // eig(P^{-1} M)
    /// eig(Phat^{-1} M) is complex in general: real-part range and largest |imag|.
    SpectrumBounds phat_inv_m_real;
    double phat_inv_m_max_imag = 0.0;
    SpectrumBounds tau_ax;  // eig(tau(Ax))
    SpectrumBounds tau_ay;  // eig(tau(Ay))
    SpectrumBounds m;       // eig(M)
    /// min over rows of (M_ii - 1) - sum_{j != i} |M_ij|; non-negative when the row inequality holds.
    double row_dominance_slack = 0.0;
};

[[nodiscard]] SpectralReport spectral_report(const PenalizedOperator& op, const TauPreconditioner& p,
                                             std::size_t cap = kDefaultDenseCap);

}  // namespace fracpen
