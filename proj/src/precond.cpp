#include "fracpen/precond.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracpen/errors.hpp"

namespace fracpen {

namespace {

auto reciprocal_shifted(double shift, std::span<const double> lambda, double max_abs)
    -> std::vector<double>
{
    std::vector<double> inv(lambda.size());
    for (std::size_t k = 0; k < lambda.size(); ++k) {
        const double denom = shift - lambda[k];
        if (denom == 0.0 || std::abs(denom) < 1e-14 * max_abs) {
            throw SingularOperatorError("tau preconditioner: shift " + std::to_string(shift) +
                                        " hits eigenvalue " + std::to_string(lambda[k]));
        }
        inv[k] = 1.0 / denom;
    }
    return inv;
}

}  // namespace

TauPreconditioner::TauPreconditioner(const PenalizedOperator& op)
    : taux_(tau_from_toeplitz(op.ax())),
      tauy_(tau_from_toeplitz(op.ay())),
      mask_(op.mask()),
      sine2d_(op.n1(), op.n2())
{
    const std::size_t n1 = this->n1();
    const std::size_t n2 = this->n2();
    const auto lx = taux_.eigenvalues();
    const auto ly = tauy_.eigenvalues();
    lambda2d_.resize(n1 * n2);
    double max_abs = 0.0;
    for (std::size_t j = 0; j < n2; ++j) {
        for (std::size_t i = 0; i < n1; ++i) {
            lambda2d_[i + j * n1] = lx[i] + ly[j];
            max_abs = std::max(max_abs, std::abs(lambda2d_[i + j * n1]));
        }
    }
    inv_inside_ = reciprocal_shifted(1.0, lambda2d_, max_abs);
    inv_outside_ = reciprocal_shifted(1.0 + mask_.penalty(), lambda2d_, max_abs);
}

void TauPreconditioner::apply(std::span<const double> in, std::span<double> out) const
{
    const std::size_t n = size();
    if (in.size() != n || out.size() != n) {
        throw SizeError("apply_Phat_inv: expected length " + std::to_string(n));
    }
    thread_local std::vector<double> w1;
    thread_local std::vector<double> w2;
    w1.assign(in.begin(), in.end());
    sine2d_.apply_inplace(w1);
    w2.assign(w1.begin(), w1.end());
    for (std::size_t k = 0; k < n; ++k) {
        w1[k] *= inv_inside_[k];
        w2[k] *= inv_outside_[k];
    }
    sine2d_.apply_inplace(w1);
    sine2d_.apply_inplace(w2);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = mask_.inside(k) ? w1[k] : w2[k];
    }
}

Eigen::MatrixXd TauPreconditioner::dense_tau1(std::size_t cap) const
{
    check_dense_cap(size(), cap, "dense_tau1");
    return kronecker_sum(taux_.dense(), tauy_.dense());
}

Eigen::MatrixXd TauPreconditioner::dense_P(std::size_t cap) const
{
    Eigen::MatrixXd p = -dense_tau1(cap);
    for (std::size_t k = 0; k < size(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        p(kk, kk) += 1.0 + mask_.penalty_diagonal(k);
    }
    return p;
}

std::vector<double> apply_Phat_inv(const TauPreconditioner& p, std::span<const double> v)
{
    std::vector<double> out(v.size());
    p.apply(v, out);
    return out;
}

Eigen::MatrixXd dense_P(const TauPreconditioner& p, std::size_t cap)
{
    return p.dense_P(cap);
}

}  // namespace fracpen
