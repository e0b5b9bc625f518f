#include "fracpen/tau.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracpen/errors.hpp"

namespace fracpen {

TauSpectrum::TauSpectrum(std::vector<double> eigenvalues, SineTransform transform)
    : eig_(std::move(eigenvalues)), sine_(std::move(transform))
{
    if (eig_.size() != sine_.size()) {
        throw SizeError("tau spectrum: eigenvalue count does not match transform length");
    }
}

void TauSpectrum::solve_shifted(double shift, std::span<const double> in, std::span<double> out) const
{
    const std::size_t n = eig_.size();
    if (in.size() != n || out.size() != n) {
        throw SizeError("tau solve: expected length " + std::to_string(n));
    }
    double max_abs = 0.0;
    for (double l : eig_) {
        max_abs = std::max(max_abs, std::abs(l));
    }
    const double floor = 1e-14 * max_abs;
    std::vector<double> work(in.begin(), in.end());
    sine_.apply(work, work);
    for (std::size_t k = 0; k < n; ++k) {
        const double denom = shift - eig_[k];
        if (denom == 0.0 || std::abs(denom) < floor) {
            throw SingularOperatorError("tau solve: shift " + std::to_string(shift) +
                                        " hits eigenvalue " + std::to_string(eig_[k]));
        }
        work[k] /= denom;
    }
    sine_.apply(work, out);
}

Eigen::MatrixXd TauSpectrum::dense() const
{
    const auto n = static_cast<Eigen::Index>(eig_.size());
    Eigen::MatrixXd s(n, n);
    std::vector<double> col(eig_.size());
    for (Eigen::Index j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[static_cast<std::size_t>(j)] = 1.0;
        sine_.apply(col, col);
        s.col(j) = Eigen::Map<const Eigen::VectorXd>(col.data(), n);
    }
    const Eigen::Map<const Eigen::VectorXd> lam(eig_.data(), n);
    return s * lam.asDiagonal() * s;
}

TauSpectrum tau_from_toeplitz(const SymmetricToeplitz& t)
{
    const std::size_t n = t.size();
    const auto tk = [&](std::size_t k) { return k < n ? t.first_col()[k] : 0.0; };

    std::vector<double> c(n);
    for (std::size_t r = 0; r < n; ++r) {
        c[r] = tk(r) - tk(r + 2);
    }
    SineTransform sine(n);
    std::vector<double> sc(n);
    std::vector<double> se(n, 0.0);
    se[0] = 1.0;
    sine.apply(c, sc);
    sine.apply(se, se);
    for (std::size_t k = 0; k < n; ++k) {
        sc[k] /= se[k];
    }
    return TauSpectrum(std::move(sc), std::move(sine));
}

std::vector<double> tau_solve_shifted(const TauSpectrum& tau, double shift, std::span<const double> v)
{
    std::vector<double> out(v.size());
    tau.solve_shifted(shift, v, out);
    return out;
}

}  // namespace fracpen
