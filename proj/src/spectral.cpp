#include "fracpen/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace fracpen {

namespace {

SpectrumBounds bounds_of(const Eigen::VectorXd& ev)
{
    return {ev.minCoeff(), ev.maxCoeff()};
}

SpectrumBounds symmetric_bounds(const Eigen::MatrixXd& a)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    return bounds_of(es.eigenvalues());
}

Eigen::MatrixXd phat_inv_dense(const TauPreconditioner& p)
{
    const auto n = static_cast<Eigen::Index>(p.size());
    Eigen::MatrixXd out(n, n);
    std::vector<double> e(p.size());
    std::vector<double> col(p.size());
    for (Eigen::Index j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[static_cast<std::size_t>(j)] = 1.0;
        p.apply(e, col);
        out.col(j) = Eigen::Map<const Eigen::VectorXd>(col.data(), n);
    }
    return out;
}

}  // namespace

SpectrumBounds generalized_bounds(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b, Eigen::EigenvaluesOnly);
    return bounds_of(es.eigenvalues());
}

SpectralReport spectral_report(const PenalizedOperator& op, const TauPreconditioner& p, std::size_t cap)
{
    SpectralReport rep;
    const Eigen::MatrixXd a = op.dense_A(cap);
    const Eigen::MatrixXd m = op.dense_M(cap);
    const Eigen::MatrixXd tau1 = p.dense_tau1(cap);
    const Eigen::MatrixXd pm = p.dense_P(cap);

    // tau_1(A) is negative definite, so flip both signs to get an SPD pencil.
    rep.tau_inv_a = generalized_bounds(-a, -tau1);
    rep.p_inv_m = generalized_bounds(m, pm);

    Eigen::EigenSolver<Eigen::MatrixXd> es(phat_inv_dense(p) * m, false);
    const Eigen::VectorXcd ev = es.eigenvalues();
    rep.phat_inv_m_real = bounds_of(ev.real());
    rep.phat_inv_m_max_imag = ev.imag().cwiseAbs().maxCoeff();

    rep.tau_ax = bounds_of(Eigen::Map<const Eigen::VectorXd>(p.taux().eigenvalues().data(),
                                                              static_cast<Eigen::Index>(p.n1())));
    rep.tau_ay = bounds_of(Eigen::Map<const Eigen::VectorXd>(p.tauy().eigenvalues().data(),
                                                              static_cast<Eigen::Index>(p.n2())));
    rep.m = symmetric_bounds(m);

    double slack = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double off = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
        slack = std::min(slack, (m(i, i) - 1.0) - off);
    }
    rep.row_dominance_slack = slack;
    return rep;
}

}  // namespace fracpen
