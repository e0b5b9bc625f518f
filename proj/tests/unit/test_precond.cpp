#include <gtest/gtest.h>

#include <cmath>

#include "../oracles.hpp"
#include "fracpen/discretization.hpp"
#include "fracpen/errors.hpp"
#include "fracpen/precond.hpp"
#include "fracpen/spectral.hpp"

namespace fracpen {
namespace {

using oracle::as_eigen;
using oracle::random_vector;
using oracle::rel_diff;

GridSpec grid_of(std::size_t n1, std::size_t n2)
{
    GridSpec g;
    g.a = 0.0;
    g.b = 4.0;
    g.c = 0.0;
    g.d = 2.0;
    g.n1 = n1;
    g.n2 = n2;
    g.m = n1;
    g.T = 1.0;
    return g;
}

bool ellipse(double x, double y)
{
    return (x - 2.0) * (x - 2.0) / 4.0 + (y - 1.0) * (y - 1.0) <= 1.0;
}

PenalizedOperator make_op(std::size_t n1, std::size_t n2, const RegionPredicate& region, double eta,
                          double alpha1 = 1.4, double alpha2 = 1.7)
{
    const auto g = grid_of(n1, n2);
    return make_penalized_operator(g, make_fractional_params(alpha1, alpha2, 1.0, 1.0, g),
                                   build_mask(g, region, eta));
}

Eigen::MatrixXd tau1_oracle(const PenalizedOperator& op)
{
    return oracle::kron_sum(oracle::tau_by_hankel(op.ax().dense()), oracle::tau_by_hankel(op.ay().dense()));
}

TEST(Precond, AllInsideIsResolventOfTau)
{
    const auto op = make_op(6, 5, [](double, double) { return true; }, 1e-5);
    const TauPreconditioner p(op);
    const Eigen::MatrixXd tau1 = tau1_oracle(op);
    const Eigen::MatrixXd shifted = Eigen::MatrixXd::Identity(30, 30) - tau1;
    const auto v = random_vector(30, 1);
    EXPECT_LT(rel_diff(apply_Phat_inv(p, v), shifted.partialPivLu().solve(as_eigen(v))), 1e-12);
    EXPECT_LT((p.dense_tau1() - tau1).norm() / tau1.norm(), 1e-12);
}

TEST(Precond, AllOutsideIsShiftedResolvent)
{
    const double eta = 1e-2;
    const auto op = make_op(5, 6, [](double, double) { return false; }, eta);
    const TauPreconditioner p(op);
    const double shift = 1.0 + op.mask().penalty();
    const Eigen::MatrixXd shifted = shift * Eigen::MatrixXd::Identity(30, 30) - tau1_oracle(op);
    const auto v = random_vector(30, 2);
    EXPECT_LT(rel_diff(apply_Phat_inv(p, v), shifted.partialPivLu().solve(as_eigen(v))), 1e-12);
}

TEST(Precond, EllipseMatchesDenseFormula)
{
    const auto op = make_op(8, 8, ellipse, 1e-5);
    const TauPreconditioner p(op);
    const Eigen::MatrixXd tau1 = tau1_oracle(op);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(64, 64);
    Eigen::VectorXd phi(64);
    for (std::size_t k = 0; k < 64; ++k) {
        phi(static_cast<Eigen::Index>(k)) = op.mask().phi(k);
    }
    const Eigen::MatrixXd inside_inv = (eye - tau1).inverse();
    const Eigen::MatrixXd outside_inv = ((1.0 + op.mask().penalty()) * eye - tau1).inverse();
    const Eigen::MatrixXd want = (eye - Eigen::MatrixXd(phi.asDiagonal())) * inside_inv +
                                 Eigen::MatrixXd(phi.asDiagonal()) * outside_inv;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto v = random_vector(64, 10 + seed);
        EXPECT_LT(rel_diff(apply_Phat_inv(p, v), want * as_eigen(v)), 1e-11);
    }
}

TEST(Precond, ApplyAllowsAliasing)
{
    const auto op = make_op(7, 4, ellipse, 1e-3);
    const TauPreconditioner p(op);
    auto v = random_vector(28, 3);
    const auto want = apply_Phat_inv(p, v);
    p.apply(v, v);
    for (std::size_t k = 0; k < v.size(); ++k) {
        EXPECT_DOUBLE_EQ(v[k], want[k]);
    }
}

TEST(Precond, Linearity)
{
    const auto op = make_op(9, 7, ellipse, 1e-4);
    const TauPreconditioner p(op);
    const auto u = random_vector(63, 4);
    const auto v = random_vector(63, 5);
    std::vector<double> comb(63);
    for (std::size_t k = 0; k < 63; ++k) {
        comb[k] = 2.5 * u[k] - 0.75 * v[k];
    }
    const auto pu = as_eigen(apply_Phat_inv(p, u));
    const auto pv = as_eigen(apply_Phat_inv(p, v));
    EXPECT_LT(rel_diff(apply_Phat_inv(p, comb), 2.5 * pu - 0.75 * pv), 1e-13);
}

TEST(Precond, DensePIsSymmetricPositiveDefinite)
{
    const auto op = make_op(8, 6, ellipse, 1e-5);
    const TauPreconditioner p(op);
    const Eigen::MatrixXd pd = dense_P(p);
    EXPECT_LT((pd - pd.transpose()).norm(), 1e-12 * pd.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pd);
    EXPECT_GT(es.eigenvalues().minCoeff(), 1.0);
}

TEST(Precond, NoPenaltyEigenvaluesAreOneMinusLambda)
{
    const auto op = make_op(6, 4, [](double, double) { return true; }, 1.0);
    const TauPreconditioner p(op);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p.dense_P());
    std::vector<double> want;
    for (double l : p.lambda2d()) {
        want.push_back(1.0 - l);
    }
    std::sort(want.begin(), want.end());
    for (std::size_t k = 0; k < want.size(); ++k) {
        EXPECT_NEAR(es.eigenvalues()(static_cast<Eigen::Index>(k)), want[k], 1e-11 * want.back());
    }
}

TEST(Precond, PreconditionedSpectrumIsClustered)
{
    for (auto [a1, a2] : {std::pair{1.1, 1.9}, {1.4, 1.7}, {1.5, 1.5}}) {
        const auto op = make_op(12, 10, ellipse, 1e-5, a1, a2);
        const TauPreconditioner p(op);
        const auto bounds = generalized_bounds(op.dense_M(), p.dense_P());
        EXPECT_GT(bounds.min, 0.5);
        EXPECT_LT(bounds.max, 1.5);
    }
}

TEST(Precond, InvertsItsOwnDenseForm)
{
    // Phat^{-1} applied to the columns of I - tau_1 at inside nodes recovers them.
    const auto op = make_op(5, 5, [](double, double) { return true; }, 1.0);
    const TauPreconditioner p(op);
    const Eigen::MatrixXd pd = p.dense_P();
    const auto v = random_vector(25, 6);
    const Eigen::VectorXd pv = pd * as_eigen(v);
    const std::vector<double> pv_std(pv.data(), pv.data() + pv.size());
    EXPECT_LT(rel_diff(apply_Phat_inv(p, pv_std), as_eigen(v)), 1e-12);
}

TEST(Precond, SizeChecks)
{
    const auto op = make_op(4, 4, ellipse, 1.0);
    const TauPreconditioner p(op);
    std::vector<double> out(16);
    EXPECT_THROW(p.apply(std::vector<double>(15), out), SizeError);
    EXPECT_THROW((void)p.dense_P(10), SizeCapError);
}

}  // namespace
}  // namespace fracpen
