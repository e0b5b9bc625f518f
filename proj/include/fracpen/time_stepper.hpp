#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "fracpen/discretization.hpp"
#include "fracpen/gmres.hpp"
#include "fracpen/precond.hpp"
#include "fracpen/problem.hpp"

namespace fracpen {

/// State after step k: u_prev = u^k, u_prevprev = u^{k-1} (absent when k = 0).
struct TimeStepState {
    std::size_t k = 0;
    double t = 0.0;
    std::vector<double> u_prev;
    std::optional<std::vector<double>> u_prevprev;
};

/// A time step whose inner solve did not converge.
class StepFailure : public std::runtime_error {
public:
    StepFailure(std::size_t step, IterationReport report);
    [[nodiscard]] std::size_t step() const noexcept { return step_; }
    [[nodiscard]] const IterationReport& report() const noexcept { return report_; }

private:
    std::size_t step_;
    IterationReport report_;
};

struct StepResult {
    TimeStepState state;
    IterationReport report;
};

/// u^0 sampled on the interior grid, zero outside the region.
[[nodiscard]] TimeStepState initial_state(const ProblemDef& prob, const GridSpec& grid,
                                          const DomainMask& mask);

/// Right-hand side u^{k-1} + dt f(u^{k-1}, x, y, t_{k-1}), source zero-extended.
[[nodiscard]] std::vector<double> step_rhs(const TimeStepState& state, const ProblemDef& prob,
                                           const GridSpec& grid, const DomainMask& mask);

/// Initial guess for the inner solve: u^{k-1} at the first step, 2u^{k-1} - u^{k-2} after.
[[nodiscard]] std::vector<double> step_initial_guess(const TimeStepState& state);

/// One backward-Euler step M u^k = rhs solved by GMRES, preconditioned (on cfg.side) by
/// `precond` when non-null and cfg.precondition is set. Throws StepFailure.
[[nodiscard]] StepResult step(const TimeStepState& state, const PenalizedOperator& op,
                              const TauPreconditioner* precond, const ProblemDef& prob,
                              const GridSpec& grid, const SolverConfig& cfg);

struct PhaseTimings {
    double setup_seconds = 0.0;
    double solve_seconds = 0.0;
    [[nodiscard]] double per_step_seconds(std::size_t steps) const
    {
        return steps == 0 ? 0.0 : solve_seconds / static_cast<double>(steps);
    }
};

struct SolveReport {
    std::vector<IterationReport> steps;
    /// Total inner iterations over all steps / number of steps.
    double average_iterations = 0.0;
    /// Same, leaving out the first step.
    double average_iterations_after_first = 0.0;
    /// ||u_e - u||_inf / ||u_e||_inf over inside nodes at the final time (NaN without an exact solution).
    double relative_error = 0.0;
    /// max |u| over interior nodes outside the domain at the final time.
    double max_abs_extension = 0.0;
    PhaseTimings timings;
    std::vector<double> solution;
};

/// Runs all m steps of the penalized scheme.
[[nodiscard]] SolveReport run(const ProblemDef& prob, const GridSpec& grid, const FractionalParams& fp,
                              double eta, const SolverConfig& cfg);

/// Final-time error metrics for a given solution vector.
[[nodiscard]] double relative_error_inside(const ProblemDef& prob, const GridSpec& grid,
                                           const DomainMask& mask, std::span<const double> u, double t);
[[nodiscard]] double max_abs_outside(const DomainMask& mask, std::span<const double> u);

}  // namespace fracpen
