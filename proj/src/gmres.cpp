#include "fracpen/gmres.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fracpen/errors.hpp"

namespace fracpen {

namespace {

double dot(std::span<const double> a, std::span<const double> b)
{
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> a)
{
    return std::sqrt(dot(a, a));
}

void check_finite(std::span<const double> v, const char* what)
{
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw NumericBreakdownError(std::string("gmres: non-finite value in ") + what);
        }
    }
}

// Operator applications with the finite-value guard, plus the side-dependent
// pieces of the iteration.
class Operators {
public:
    Operators(const LinearOperator& a, const LinearOperator& pinv, PreconditionSide side, std::size_t n)
        : a_(a), pinv_(pinv), left_(pinv && side == PreconditionSide::left),
          right_(pinv && side == PreconditionSide::right), tmp_(n)
    {
    }

    void a(std::span<const double> x, std::span<double> y) const
    {
        a_(x, y);
        check_finite(y, "operator output");
    }

    void pinv(std::span<const double> x, std::span<double> y) const
    {
        pinv_(x, y);
        check_finite(y, "preconditioner output");
    }

    // w = (Krylov operator) v
    void krylov(std::span<const double> v, std::span<double> w)
    {
        if (right_) {
            pinv(v, tmp_);
            a(tmp_, w);
        } else if (left_) {
            a(v, tmp_);
            pinv(tmp_, w);
        } else {
            a(v, w);
        }
    }

    // Residual seen by the stopping test, in place on a true residual r.
    void monitor(std::span<double> r)
    {
        if (left_) {
            pinv(r, tmp_);
            std::copy(tmp_.begin(), tmp_.end(), r.begin());
        }
    }

    // Correction to x from a Krylov-space vector.
    void correction(std::span<const double> v, std::span<double> dx)
    {
        if (right_) {
            pinv(v, dx);
        } else {
            std::copy(v.begin(), v.end(), dx.begin());
        }
    }

private:
    const LinearOperator& a_;
    const LinearOperator& pinv_;
    bool left_;
    bool right_;
    std::vector<double> tmp_;
};

}  // namespace

void SolverConfig::validate() const
{
    if (restart < 1) {
        throw ParameterError("solver config: restart must be at least 1");
    }
    if (!(rtol > 0.0 && rtol < 1.0)) {
        throw ParameterError("solver config: rtol must lie in (0,1)");
    }
    if (maxiter < restart) {
        throw ParameterError("solver config: maxiter must be at least restart");
    }
}

GmresResult gmres_solve(const LinearOperator& apply_a, const LinearOperator& apply_pinv,
                        std::span<const double> b, std::span<const double> x0, const SolverConfig& cfg)
{
    cfg.validate();
    const std::size_t n = b.size();
    if (x0.size() != n) {
        throw SizeError("gmres: initial guess length " + std::to_string(x0.size()) +
                        " does not match rhs length " + std::to_string(n));
    }
    Operators ops(apply_a, apply_pinv, cfg.side, n);
    const std::size_t mdim = cfg.restart;

    GmresResult result;
    result.x.assign(x0.begin(), x0.end());
    auto& report = result.report;

    std::vector<double> r(n);
    std::vector<double> w(n);
    const auto true_residual = [&]() {
        ops.a(result.x, w);
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = b[i] - w[i];
        }
        return norm2(r);
    };

    const double true0 = true_residual();
    ops.monitor(r);
    double beta = norm2(r);

    double denom = beta;
    if (cfg.reference == ResidualReference::rhs) {
        std::vector<double> bm(b.begin(), b.end());
        ops.monitor(bm);
        if (const double nb = norm2(bm); nb > 0.0) {
            denom = nb;
        }
    }
    const auto finish = [&](double true_now) {
        report.true_relative_residual = true0 > 0.0 ? true_now / true0 : 0.0;
    };

    report.residual_history.push_back(denom > 0.0 ? beta / denom : 0.0);
    if (beta == 0.0 || beta / denom < cfg.rtol) {
        report.converged = true;
        finish(true0);
        return result;
    }

    // Krylov basis V (mdim+1 vectors), Hessenberg H column-major (mdim+1) x mdim,
    // Givens rotations (cs, sn) and the rotated rhs g.
    // Basis vectors are allocated on first use; well-preconditioned solves stop long before mdim.
    std::vector<std::vector<double>> v;
    v.reserve(mdim + 1);
    const auto basis = [&](std::size_t k) -> std::vector<double>& {
        while (v.size() <= k) {
            v.emplace_back(n);
        }
        return v[k];
    };
    std::vector<double> h((mdim + 1) * mdim);
    std::vector<double> cs(mdim);
    std::vector<double> sn(mdim);
    std::vector<double> g(mdim + 1);
    std::vector<double> y(mdim);
    std::vector<double> dx(n);
    const auto hij = [&](std::size_t i, std::size_t j) -> double& { return h[i + j * (mdim + 1)]; };

    while (report.iterations < cfg.maxiter) {
        auto& v0 = basis(0);
        for (std::size_t i = 0; i < n; ++i) {
            v0[i] = r[i] / beta;
        }
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;

        std::size_t k = 0;
        while (k < mdim && report.iterations < cfg.maxiter) {
            ops.krylov(v[k], w);

            // Modified Gram-Schmidt; one more pass when the norm drops by more than 1/sqrt(2).
            const double norm_before = norm2(w);
            for (std::size_t i = 0; i <= k; ++i) {
                const double c = dot(w, v[i]);
                hij(i, k) = c;
                for (std::size_t q = 0; q < n; ++q) {
                    w[q] -= c * v[i][q];
                }
            }
            double norm_after = norm2(w);
            if (norm_after < 0.7071067811865476 * norm_before) {
                for (std::size_t i = 0; i <= k; ++i) {
                    const double c = dot(w, v[i]);
                    hij(i, k) += c;
                    for (std::size_t q = 0; q < n; ++q) {
                        w[q] -= c * v[i][q];
                    }
                }
                norm_after = norm2(w);
            }
            hij(k + 1, k) = norm_after;
            const bool happy = norm_after <= 1e-14 * norm_before;
            if (!happy) {
                auto& next = basis(k + 1);
                for (std::size_t q = 0; q < n; ++q) {
                    next[q] = w[q] / norm_after;
                }
            }

            for (std::size_t i = 0; i < k; ++i) {
                const double t = cs[i] * hij(i, k) + sn[i] * hij(i + 1, k);
                hij(i + 1, k) = -sn[i] * hij(i, k) + cs[i] * hij(i + 1, k);
                hij(i, k) = t;
            }
            const double rho = std::hypot(hij(k, k), hij(k + 1, k));
            cs[k] = hij(k, k) / rho;
            sn[k] = hij(k + 1, k) / rho;
            hij(k, k) = rho;
            hij(k + 1, k) = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k] * g[k];

            ++k;
            ++report.iterations;
            const double rel = std::abs(g[k]) / denom;
            report.residual_history.push_back(rel);
            if (happy || rel < cfg.rtol) {
                break;
            }
        }

        for (std::size_t ii = k; ii-- > 0;) {
            double s = g[ii];
            for (std::size_t j = ii + 1; j < k; ++j) {
                s -= hij(ii, j) * y[j];
            }
            y[ii] = s / hij(ii, ii);
        }
        std::fill(w.begin(), w.end(), 0.0);
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t q = 0; q < n; ++q) {
                w[q] += y[j] * v[j][q];
            }
        }
        ops.correction(w, dx);
        for (std::size_t q = 0; q < n; ++q) {
            result.x[q] += dx[q];
        }

        const double true_now = true_residual();
        ops.monitor(r);
        beta = norm2(r);
        report.residual_history.back() = beta / denom;
        finish(true_now);
        if (beta == 0.0 || beta / denom < cfg.rtol) {
            report.converged = true;
            return result;
        }
        // Restart (also after a happy breakdown whose rounding left the residual above tolerance).
    }
    return result;
}

}  // namespace fracpen
