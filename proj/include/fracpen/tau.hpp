#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "fracpen/sine_transform.hpp"
#include "fracpen/toeplitz.hpp"

namespace fracpen {

/// Spectrum of the tau approximant tau(T) = T - H = S diag(eigenvalues) S,
/// where H is the Hankel correction of the symmetric Toeplitz matrix T.
class TauSpectrum {
public:
    TauSpectrum(std::vector<double> eigenvalues, SineTransform transform);

    [[nodiscard]] std::size_t size() const noexcept { return eig_.size(); }
    [[nodiscard]] std::span<const double> eigenvalues() const noexcept { return eig_; }
    [[nodiscard]] const SineTransform& transform() const noexcept { return sine_; }

    /// out = (shift I - tau)^{-1} in. Throws SingularOperatorError when some
    /// |shift - lambda| falls below 1e-14 max|lambda| (or is exactly zero).
    void solve_shifted(double shift, std::span<const double> in, std::span<double> out) const;

    /// S diag(eigenvalues) S, for oracle checks.
    [[nodiscard]] Eigen::MatrixXd dense() const;

private:
    std::vector<double> eig_;
    SineTransform sine_;
};

/// Eigenvalues of tau(T) from the quotient (S c) / (S e_1), where
/// c_i = t_{i-1} - t_{i+1} is the first column of T - H (t_n = t_{n+1} = 0).
[[nodiscard]] TauSpectrum tau_from_toeplitz(const SymmetricToeplitz& t);

[[nodiscard]] std::vector<double> tau_solve_shifted(const TauSpectrum& tau, double shift,
                                                    std::span<const double> v);

}  // namespace fracpen
