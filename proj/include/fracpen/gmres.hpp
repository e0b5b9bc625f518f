#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fracpen {

/// y = Op(x). Input and output never alias.
using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

/// Where the preconditioner enters the Krylov process.
enum class PreconditionSide {
    /// Arnoldi on Pinv A; the stopping test sees the preconditioned residual Pinv (b - A x).
    left,
    /// Arnoldi on A Pinv with x = x_0 + Pinv y; the stopping test sees the true residual.
    right,
};

/// Denominator of the relative residual in the stopping test.
enum class ResidualReference {
    /// ||r_k|| / ||r_0||.
    initial_residual,
    /// ||r_k|| / ||b|| (||Pinv b|| under left preconditioning).
    rhs,
};

/// Defaults follow the benchmark tables: GMRES(20), left preconditioning and
/// ||Pinv r_k|| / ||Pinv b|| < 1e-8.
struct SolverConfig {
    std::size_t restart = 20;
    double rtol = 1e-8;
    std::size_t maxiter = 2000;
    bool precondition = true;
    PreconditionSide side = PreconditionSide::left;
    ResidualReference reference = ResidualReference::rhs;

    /// Throws ParameterError unless restart >= 1, 0 < rtol < 1, maxiter >= restart.
    void validate() const;
};

struct IterationReport {
    /// Inner (Arnoldi) iterations performed.
    std::size_t iterations = 0;
    /// Relative residual of the stopping test at x_0, x_1, ... The residual is the
    /// true one for right (or no) preconditioning and Pinv (b - A x_k) for left.
    /// Inner entries come from the Arnoldi least-squares problem; restart
    /// boundaries and the final entry are recomputed explicitly.
    std::vector<double> residual_history;
    bool converged = false;
    /// ||b - A x|| / ||b - A x_0|| for the returned x, always unpreconditioned.
    double true_relative_residual = 1.0;
};

struct GmresResult {
    std::vector<double> x;
    IterationReport report;
};

/// Restarted GMRES(restart) on A x = b, preconditioned on cfg.side when
/// apply_pinv is non-empty. Hitting maxiter yields converged = false; NaN/Inf
/// in an operator output throws NumericBreakdownError.
[[nodiscard]] GmresResult gmres_solve(const LinearOperator& apply_a, const LinearOperator& apply_pinv,
                                      std::span<const double> b, std::span<const double> x0,
                                      const SolverConfig& cfg);

}  // namespace fracpen
