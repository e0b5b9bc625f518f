#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "fracpen/discretization.hpp"
#include "fracpen/sine_transform.hpp"
#include "fracpen/tau.hpp"

namespace fracpen {

/// Sine-transform preconditioner for M = I - A + D.
///
/// tau_1(A) = I (x) tau(Ax) + tau(Ay) (x) I is diagonalized by S_{n2} (x) S_{n1}
/// with eigenvalues lambda_ij = lambda^x_i + lambda^y_j. The practical inverse
///
///   Phat^{-1} = (I - Phi) (I - tau_1(A))^{-1} + Phi ((1 + dt/eta) I - tau_1(A))^{-1}
///
/// costs one forward and two inverse 2-D sine transforms. Phat^{-1} is not
/// symmetric; it is meant for GMRES.
class TauPreconditioner {
public:
    explicit TauPreconditioner(const PenalizedOperator& op);

    [[nodiscard]] std::size_t n1() const noexcept { return taux_.size(); }
    [[nodiscard]] std::size_t n2() const noexcept { return tauy_.size(); }
    [[nodiscard]] std::size_t size() const noexcept { return n1() * n2(); }
    [[nodiscard]] const TauSpectrum& taux() const noexcept { return taux_; }
    [[nodiscard]] const TauSpectrum& tauy() const noexcept { return tauy_; }
    [[nodiscard]] std::span<const double> lambda2d() const noexcept { return lambda2d_; }
    [[nodiscard]] const DomainMask& mask() const noexcept { return mask_; }

    /// out = Phat^{-1} in. Spans may alias.
    void apply(std::span<const double> in, std::span<double> out) const;

    /// Dense tau_1(A).
    [[nodiscard]] Eigen::MatrixXd dense_tau1(std::size_t cap = kDefaultDenseCap) const;
    /// Dense P = I - tau_1(A) + D.
    [[nodiscard]] Eigen::MatrixXd dense_P(std::size_t cap = kDefaultDenseCap) const;

private:
    TauSpectrum taux_;
    TauSpectrum tauy_;
    DomainMask mask_;
    SineTransform2D sine2d_;
    std::vector<double> lambda2d_;
    std::vector<double> inv_inside_;   // 1 / (1 - lambda_ij)
    std::vector<double> inv_outside_;  // 1 / (1 + dt/eta - lambda_ij)
};

[[nodiscard]] std::vector<double> apply_Phat_inv(const TauPreconditioner& p, std::span<const double> v);

[[nodiscard]] Eigen::MatrixXd dense_P(const TauPreconditioner& p, std::size_t cap = kDefaultDenseCap);

}  // namespace fracpen
