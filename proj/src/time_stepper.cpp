#include "fracpen/time_stepper.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "fracpen/errors.hpp"

namespace fracpen {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

StepFailure::StepFailure(std::size_t step, IterationReport report)
    : std::runtime_error("time step " + std::to_string(step) + ": inner solve did not converge after " +
                         std::to_string(report.iterations) + " iterations"),
      step_(step),
      report_(std::move(report))
{
}

TimeStepState initial_state(const ProblemDef& prob, const GridSpec& grid, const DomainMask& mask)
{
    TimeStepState s;
    s.u_prev.assign(grid.unknowns(), 0.0);
    for (std::size_t j = 0; j < grid.n2; ++j) {
        for (std::size_t i = 0; i < grid.n1; ++i) {
            if (mask.inside(i, j)) {
                s.u_prev[i + j * grid.n1] = prob.u0(grid.x(i + 1), grid.y(j + 1));
            }
        }
    }
    return s;
}

std::vector<double> step_rhs(const TimeStepState& state, const ProblemDef& prob, const GridSpec& grid,
                             const DomainMask& mask)
{
    const double dt = grid.dt();
    std::vector<double> rhs = state.u_prev;
    for (std::size_t j = 0; j < grid.n2; ++j) {
        for (std::size_t i = 0; i < grid.n1; ++i) {
            const std::size_t k = i + j * grid.n1;
            if (mask.inside(k)) {
                rhs[k] += dt * prob.source(state.u_prev[k], grid.x(i + 1), grid.y(j + 1), state.t);
            }
        }
    }
    return rhs;
}

std::vector<double> step_initial_guess(const TimeStepState& state)
{
    if (!state.u_prevprev) {
        return state.u_prev;
    }
    std::vector<double> guess(state.u_prev.size());
    for (std::size_t k = 0; k < guess.size(); ++k) {
        guess[k] = 2.0 * state.u_prev[k] - (*state.u_prevprev)[k];
    }
    return guess;
}

StepResult step(const TimeStepState& state, const PenalizedOperator& op, const TauPreconditioner* precond,
                const ProblemDef& prob, const GridSpec& grid, const SolverConfig& cfg)
{
    if (state.u_prev.size() != op.size()) {
        throw SizeError("step: state length does not match operator size");
    }
    const auto rhs = step_rhs(state, prob, grid, op.mask());
    const auto guess = step_initial_guess(state);

    const LinearOperator apply_m = [&op](std::span<const double> x, std::span<double> y) { op.apply(x, y); };
    LinearOperator apply_pinv;
    if (precond != nullptr && cfg.precondition) {
        apply_pinv = [precond](std::span<const double> x, std::span<double> y) { precond->apply(x, y); };
    }
    auto solved = gmres_solve(apply_m, apply_pinv, rhs, guess, cfg);
    if (!solved.report.converged) {
        throw StepFailure(state.k + 1, std::move(solved.report));
    }

    StepResult out;
    out.state.k = state.k + 1;
    out.state.t = static_cast<double>(out.state.k) * grid.dt();
    out.state.u_prevprev = state.u_prev;
    out.state.u_prev = std::move(solved.x);
    out.report = std::move(solved.report);
    return out;
}

double relative_error_inside(const ProblemDef& prob, const GridSpec& grid, const DomainMask& mask,
                             std::span<const double> u, double t)
{
    if (!prob.exact) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double diff = 0.0;
    double ref = 0.0;
    for (std::size_t j = 0; j < grid.n2; ++j) {
        for (std::size_t i = 0; i < grid.n1; ++i) {
            const std::size_t k = i + j * grid.n1;
            if (!mask.inside(k)) {
                continue;
            }
            const double ue = prob.exact(grid.x(i + 1), grid.y(j + 1), t);
            diff = std::max(diff, std::abs(ue - u[k]));
            ref = std::max(ref, std::abs(ue));
        }
    }
    return ref > 0.0 ? diff / ref : std::numeric_limits<double>::quiet_NaN();
}

double max_abs_outside(const DomainMask& mask, std::span<const double> u)
{
    double mx = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!mask.inside(k)) {
            mx = std::max(mx, std::abs(u[k]));
        }
    }
    return mx;
}

SolveReport run(const ProblemDef& prob, const GridSpec& grid, const FractionalParams& fp, double eta,
                const SolverConfig& cfg)
{
    grid.validate();
    cfg.validate();
    SolveReport report;

    const auto setup_start = Clock::now();
    const PenalizedOperator op = make_penalized_operator(grid, fp, build_mask(grid, prob.region, eta));
    std::optional<TauPreconditioner> precond;
    if (cfg.precondition) {
        precond.emplace(op);
    }
    TimeStepState state = initial_state(prob, grid, op.mask());
    report.timings.setup_seconds = seconds_since(setup_start);

    const auto solve_start = Clock::now();
    std::size_t total = 0;
    report.steps.reserve(grid.m);
    for (std::size_t k = 0; k < grid.m; ++k) {
        auto result = step(state, op, precond ? &*precond : nullptr, prob, grid, cfg);
        total += result.report.iterations;
        report.steps.push_back(std::move(result.report));
        state = std::move(result.state);
    }
    report.timings.solve_seconds = seconds_since(solve_start);

    report.average_iterations = static_cast<double>(total) / static_cast<double>(grid.m);
    if (grid.m > 1) {
        report.average_iterations_after_first =
            static_cast<double>(total - report.steps.front().iterations) / static_cast<double>(grid.m - 1);
    } else {
        report.average_iterations_after_first = report.average_iterations;
    }
    report.relative_error = relative_error_inside(prob, grid, op.mask(), state.u_prev, state.t);
    report.max_abs_extension = max_abs_outside(op.mask(), state.u_prev);
    report.solution = std::move(state.u_prev);
    return report;
}

}  // namespace fracpen
