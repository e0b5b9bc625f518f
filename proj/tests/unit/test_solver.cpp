#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "../oracles.hpp"
#include "fracpen/discretization.hpp"
#include "fracpen/errors.hpp"
#include "fracpen/example1.hpp"
#include "fracpen/precond.hpp"
#include "fracpen/time_stepper.hpp"

namespace fracpen {
namespace {

using oracle::as_eigen;

TEST(Example1, RiemannLiouvilleClosedForm)
{
    EXPECT_NEAR(example1_h(1.5, 1.0, 0.0), 64.0 / (5.0 * std::sqrt(std::numbers::pi)), 1e-13);
    EXPECT_NEAR(example1_h(1.5, 1.0, 0.0), 7.2216267, 1e-7);
    // d = 0.5, s = 1: the three terms with Gamma(3.5), Gamma(2.5), Gamma(1.5).
    const double sp = std::sqrt(std::numbers::pi);
    const double want = 24.0 / (15.0 * sp / 8.0) - 12.0 / (3.0 * sp / 4.0) + 2.0 / (sp / 2.0);
    EXPECT_NEAR(example1_h(1.5, 1.0, 0.5), want, 1e-13);
}

TEST(Example1, ExactSolutionShape)
{
    const Example1Params p;
    const auto prob = example1_problem(p);
    EXPECT_DOUBLE_EQ(prob.exact(p.a, p.b, 0.0), 1.0);
    EXPECT_NEAR(prob.exact(2.0 * p.a, p.b, 0.0), 0.0, 1e-15);
    EXPECT_NEAR(prob.exact(p.a, 0.0, 0.3), 0.0, 1e-15);
    EXPECT_NEAR(prob.exact(p.a, p.b, 1.0), std::exp(-1.0), 1e-15);
    EXPECT_TRUE(prob.region(p.a, p.b));
    EXPECT_FALSE(prob.region(0.1, 0.1));
    EXPECT_DOUBLE_EQ(prob.u0(p.a, p.b), 1.0);
}

TEST(Example1, RejectsBadParameters)
{
    Example1Params p;
    p.a = 0.0;
    EXPECT_THROW((void)example1_problem(p), ParameterError);
    p = Example1Params{};
    p.ky = -1.0;
    EXPECT_THROW((void)example1_problem(p), ParameterError);
}

// Source check: f = u_t - kx R_x u - ky R_y u with the Riesz derivatives of the
// zero-extended exact solution taken by a fine shifted Grunwald sum.
double riesz_by_grunwald(double alpha, const std::function<double(double)>& w, double x, double lo,
                         double hi, double h)
{
    const auto g = oracle::grunwald_by_hand(alpha, static_cast<std::size_t>((hi - lo) / h) + 3);
    double left = 0.0;
    double right = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double shift = (static_cast<double>(k) - 1.0) * h;
        if (x - shift > lo) {
            left += g[k] * w(x - shift);
        }
        if (x + shift < hi) {
            right += g[k] * w(x + shift);
        }
    }
    return (-1.0 / (2.0 * std::cos(alpha * std::numbers::pi / 2.0))) * (left + right) / std::pow(h, alpha);
}

TEST(Example1, SourceMatchesGrunwaldOracle)
{
    Example1Params p;
    p.kx = 0.7;
    p.ky = 1.3;
    const auto prob = example1_problem(p);
    const double t = 0.4;
    const double h = 2e-4;
    for (auto [x, y] : {std::pair{2.0, 1.0}, {1.1, 0.6}, {3.0, 1.4}, {0.5, 1.1}}) {
        const auto ext = [&](double xx, double yy) { return prob.region(xx, yy) ? prob.exact(xx, yy, t) : 0.0; };
        const double u = prob.exact(x, y, t);
        const double rx =
            riesz_by_grunwald(p.alpha1, [&](double s) { return ext(s, y); }, x, 0.0, 2.0 * p.a, h);
        const double ry =
            riesz_by_grunwald(p.alpha2, [&](double s) { return ext(x, s); }, y, 0.0, 2.0 * p.b, h);
        const double want = -u - p.kx * rx - p.ky * ry;
        const double got = prob.source(u, x, y, t);
        EXPECT_NEAR(got, want, 2e-3 * std::max(1.0, std::abs(want))) << "(" << x << "," << y << ")";
    }
}

TEST(Stepper, ZeroDataStaysZero)
{
    ProblemDef prob;
    prob.region = [](double, double) { return true; };
    prob.u0 = [](double, double) { return 0.0; };
    prob.source = [](double, double, double, double) { return 0.0; };
    GridSpec g;
    g.b = 2.0;
    g.d = 1.0;
    g.n1 = 8;
    g.n2 = 6;
    g.m = 3;
    const auto rep = run(prob, g, make_fractional_params(1.5, 1.5, 1.0, 1.0, g), 1e-5, SolverConfig{});
    for (double v : rep.solution) {
        EXPECT_EQ(v, 0.0);
    }
    EXPECT_TRUE(std::isnan(rep.relative_error));
}

TEST(Stepper, ScalarClosedForm)
{
    ProblemDef prob;
    prob.region = [](double, double) { return true; };
    prob.u0 = [](double, double) { return 2.0; };
    prob.source = [](double u, double, double, double t) { return 0.5 * u + t; };
    GridSpec g;
    g.n1 = 1;
    g.n2 = 1;
    g.m = 1;
    g.T = 0.1;
    const auto fp = make_fractional_params(1.3, 1.6, 1.0, 2.0, g);
    const auto rep = run(prob, g, fp, 1e-5, SolverConfig{});
    const double g1x = -1.3;
    const double g1y = -1.6;
    const double want = (2.0 + 0.1 * 1.0) / (1.0 - 2.0 * g1x * fp.cx - 2.0 * g1y * fp.cy);
    ASSERT_EQ(rep.solution.size(), 1u);
    EXPECT_NEAR(rep.solution[0], want, 1e-12);
}

TEST(Stepper, MatchesDenseLuTrajectory)
{
    const Example1Params p;
    const auto prob = example1_problem(p);
    const auto g = example1_grid(p, 16, 16, 8, 1.0);
    const auto fp = make_fractional_params(p.alpha1, p.alpha2, p.kx, p.ky, g);
    const double eta = 1e-5;
    SolverConfig cfg;
    cfg.rtol = 1e-12;
    const auto rep = run(prob, g, fp, eta, cfg);

    const auto mask = build_mask(g, prob.region, eta);
    const auto op = make_penalized_operator(g, fp, mask);
    const auto lu = op.dense_M().partialPivLu();
    auto state = initial_state(prob, g, mask);
    for (std::size_t k = 0; k < g.m; ++k) {
        const auto rhs = step_rhs(state, prob, g, mask);
        const Eigen::VectorXd u = lu.solve(as_eigen(rhs));
        state.u_prevprev = state.u_prev;
        state.u_prev.assign(u.data(), u.data() + u.size());
        ++state.k;
        state.t = g.dt() * static_cast<double>(state.k);
    }
    EXPECT_LT(oracle::rel_diff(rep.solution, as_eigen(state.u_prev)), 1e-9);
    ASSERT_EQ(rep.steps.size(), g.m);
    for (const auto& s : rep.steps) {
        EXPECT_TRUE(s.converged);
    }
}

TEST(Stepper, InitialGuessExtrapolates)
{
    TimeStepState s;
    s.u_prev = {1.0, 2.0};
    EXPECT_EQ(step_initial_guess(s), (std::vector<double>{1.0, 2.0}));
    s.u_prevprev = std::vector<double>{0.5, 3.0};
    EXPECT_EQ(step_initial_guess(s), (std::vector<double>{1.5, 1.0}));
}

TEST(Stepper, SourceOnlyInside)
{
    ProblemDef prob;
    prob.region = [](double x, double) { return x < 0.5; };
    prob.u0 = [](double, double) { return 0.0; };
    prob.source = [](double, double, double, double) { return 1.0; };
    GridSpec g;
    g.n1 = 4;
    g.n2 = 2;
    g.m = 2;
    const auto mask = build_mask(g, prob.region, 1.0);
    const auto state = initial_state(prob, g, mask);
    const auto rhs = step_rhs(state, prob, g, mask);
    for (std::size_t k = 0; k < rhs.size(); ++k) {
        EXPECT_DOUBLE_EQ(rhs[k], mask.inside(k) ? g.dt() : 0.0);
    }
}

TEST(Stepper, FailureCarriesStepAndReport)
{
    const Example1Params p;
    const auto prob = example1_problem(p);
    const auto g = example1_grid(p, 16, 16, 4, 1.0);
    SolverConfig cfg;
    cfg.precondition = false;
    cfg.restart = 2;
    cfg.maxiter = 2;
    try {
        (void)run(prob, g, make_fractional_params(p.alpha1, p.alpha2, p.kx, p.ky, g), 1e-5, cfg);
        FAIL() << "expected StepFailure";
    } catch (const StepFailure& e) {
        EXPECT_EQ(e.step(), 1u);
        EXPECT_FALSE(e.report().converged);
        EXPECT_EQ(e.report().iterations, 2u);
    }
}

TEST(Stepper, ParameterErrors)
{
    const Example1Params p;
    const auto prob = example1_problem(p);
    const auto g = example1_grid(p, 8, 8, 4, 1.0);
    const auto fp = make_fractional_params(p.alpha1, p.alpha2, p.kx, p.ky, g);
    EXPECT_THROW((void)run(prob, g, fp, 0.0, SolverConfig{}), ParameterError);
    SolverConfig bad;
    bad.rtol = 2.0;
    EXPECT_THROW((void)run(prob, g, fp, 1e-5, bad), ParameterError);
}

TEST(Stepper, CoarseErrorIsSmall)
{
    const Example1Params p;
    const auto prob = example1_problem(p);
    const auto g = example1_grid(p, 16, 16, 16, 1.0);
    const auto rep = run(prob, g, make_fractional_params(p.alpha1, p.alpha2, p.kx, p.ky, g), 1e-5, SolverConfig{});
    EXPECT_GT(rep.relative_error, 1e-3);
    EXPECT_LT(rep.relative_error, 3e-2);
    EXPECT_LT(rep.max_abs_extension, 1e-4);
    EXPECT_LT(rep.average_iterations, 10.0);
}

}  // namespace
}  // namespace fracpen
