#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "../oracles.hpp"
#include "fracpen/errors.hpp"
#include "fracpen/gmres.hpp"

namespace fracpen {
namespace {

using oracle::as_eigen;
using oracle::random_vector;
using oracle::rel_diff;

LinearOperator dense_op(const Eigen::MatrixXd& m)
{
    return [m](std::span<const double> x, std::span<double> y) {
        const Eigen::VectorXd r = m * as_eigen(x);
        std::copy(r.data(), r.data() + r.size(), y.begin());
    };
}

Eigen::MatrixXd spd(std::size_t n, std::uint64_t seed)
{
    const auto v = random_vector(n * n, seed);
    const Eigen::Map<const Eigen::MatrixXd> r(v.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    return r * r.transpose() + static_cast<double>(n) * Eigen::MatrixXd::Identity(r.rows(), r.cols());
}

TEST(Gmres, IdentityConvergesInOneIteration)
{
    const auto b = random_vector(10, 1);
    const auto res = gmres_solve(dense_op(Eigen::MatrixXd::Identity(10, 10)), {}, b,
                                 std::vector<double>(10, 0.0), SolverConfig{});
    EXPECT_TRUE(res.report.converged);
    EXPECT_EQ(res.report.iterations, 1u);
    EXPECT_LT(rel_diff(res.x, as_eigen(b)), 1e-14);
}

TEST(Gmres, MatchesDenseLu)
{
    const Eigen::MatrixXd a = spd(16, 2);
    const auto b = random_vector(16, 3);
    SolverConfig cfg;
    cfg.rtol = 1e-12;
    for (auto side : {PreconditionSide::left, PreconditionSide::right}) {
        for (auto ref : {ResidualReference::rhs, ResidualReference::initial_residual}) {
            cfg.side = side;
            cfg.reference = ref;
            const auto res = gmres_solve(dense_op(a), {}, b, std::vector<double>(16, 0.0), cfg);
            EXPECT_TRUE(res.report.converged);
            EXPECT_LT(rel_diff(res.x, a.partialPivLu().solve(as_eigen(b))), 1e-10);
            EXPECT_LT(res.report.true_relative_residual, 1e-11);
        }
    }
}

TEST(Gmres, PerfectPreconditionerNeedsOneIteration)
{
    const Eigen::MatrixXd a = spd(20, 4);
    const Eigen::MatrixXd ainv = a.inverse();
    const auto b = random_vector(20, 5);
    for (auto side : {PreconditionSide::left, PreconditionSide::right}) {
        SolverConfig cfg;
        cfg.side = side;
        const auto res = gmres_solve(dense_op(a), dense_op(ainv), b, std::vector<double>(20, 0.0), cfg);
        EXPECT_TRUE(res.report.converged);
        EXPECT_EQ(res.report.iterations, 1u);
        EXPECT_LT(rel_diff(res.x, ainv * as_eigen(b)), 1e-10);
    }
}

TEST(Gmres, ExactInitialGuessReturnsImmediately)
{
    const Eigen::MatrixXd a = spd(8, 6);
    const auto b = random_vector(8, 7);
    const Eigen::VectorXd x = a.partialPivLu().solve(as_eigen(b));
    const auto res = gmres_solve(dense_op(a), {}, b, std::vector<double>(x.data(), x.data() + 8), SolverConfig{});
    EXPECT_TRUE(res.report.converged);
    EXPECT_EQ(res.report.iterations, 0u);
    EXPECT_EQ(res.report.residual_history.size(), 1u);
}

TEST(Gmres, ZeroRhsAndZeroGuess)
{
    const auto res = gmres_solve(dense_op(spd(5, 8)), {}, std::vector<double>(5, 0.0),
                                 std::vector<double>(5, 0.0), SolverConfig{});
    EXPECT_TRUE(res.report.converged);
    EXPECT_EQ(res.report.iterations, 0u);
}

TEST(Gmres, StopsAtMaxiter)
{
    // A cyclic shift stalls GMRES until the full dimension is reached.
    const std::size_t n = 40;
    Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        shift(static_cast<Eigen::Index>((i + 1) % n), static_cast<Eigen::Index>(i)) = 1.0;
    }
    std::vector<double> b(n, 0.0);
    b[0] = 1.0;
    SolverConfig cfg;
    cfg.restart = 5;
    cfg.maxiter = 15;
    const auto res = gmres_solve(dense_op(shift), {}, b, std::vector<double>(n, 0.0), cfg);
    EXPECT_FALSE(res.report.converged);
    EXPECT_EQ(res.report.iterations, 15u);
    EXPECT_EQ(res.report.residual_history.size(), 16u);
}

TEST(Gmres, NonFiniteOperatorThrows)
{
    const LinearOperator bad = [](std::span<const double>, std::span<double> y) {
        std::fill(y.begin(), y.end(), std::numeric_limits<double>::quiet_NaN());
    };
    EXPECT_THROW((void)gmres_solve(bad, {}, random_vector(4, 9), std::vector<double>(4, 0.0), SolverConfig{}),
                 NumericBreakdownError);
    const Eigen::MatrixXd a = spd(4, 10);
    EXPECT_THROW(
        (void)gmres_solve(dense_op(a), bad, random_vector(4, 9), std::vector<double>(4, 0.0), SolverConfig{}),
        NumericBreakdownError);
}

TEST(Gmres, MonotoneWithinCycle)
{
    const Eigen::MatrixXd a = spd(60, 11) + 5.0 * Eigen::MatrixXd::Random(60, 60);
    const auto b = random_vector(60, 12);
    SolverConfig cfg;
    cfg.restart = 60;
    cfg.maxiter = 60;
    cfg.rtol = 1e-10;
    const auto res = gmres_solve(dense_op(a), {}, b, std::vector<double>(60, 0.0), cfg);
    const auto& h = res.report.residual_history;
    for (std::size_t k = 1; k + 1 < h.size(); ++k) {
        EXPECT_LE(h[k], h[k - 1] * (1.0 + 1e-12)) << "k=" << k;
    }
}

TEST(Gmres, PreconditionedAndPlainAgree)
{
    const Eigen::MatrixXd a = spd(30, 13);
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(30, 30);
    jacobi.diagonal() = a.diagonal().cwiseInverse();
    const auto b = random_vector(30, 14);
    SolverConfig cfg;
    cfg.rtol = 1e-12;
    const auto plain = gmres_solve(dense_op(a), {}, b, std::vector<double>(30, 0.0), cfg);
    const auto pre = gmres_solve(dense_op(a), dense_op(jacobi), b, std::vector<double>(30, 0.0), cfg);
    EXPECT_LT(rel_diff(pre.x, as_eigen(plain.x)), 1e-10);
}

TEST(Gmres, ConfigValidation)
{
    SolverConfig cfg;
    cfg.restart = 0;
    EXPECT_THROW(cfg.validate(), ParameterError);
    cfg = SolverConfig{};
    cfg.rtol = 0.0;
    EXPECT_THROW(cfg.validate(), ParameterError);
    cfg = SolverConfig{};
    cfg.maxiter = 5;
    EXPECT_THROW(cfg.validate(), ParameterError);
    EXPECT_THROW((void)gmres_solve(dense_op(spd(3, 1)), {}, random_vector(3, 1), std::vector<double>(4, 0.0),
                                   SolverConfig{}),
                 SizeError);
}

}  // namespace
}  // namespace fracpen
