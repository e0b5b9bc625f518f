#include "fracpen/toeplitz.hpp"

#include <complex>
#include <string>

#include "fftw_plan.hpp"
#include "fracpen/errors.hpp"

namespace fracpen {

namespace detail {

struct ToeplitzPlans {
    explicit ToeplitzPlans(std::size_t embed)
    {
        const int len = static_cast<int>(embed);
        double* real = fftw_alloc_real(embed);
        fftw_complex* freq = fftw_alloc_complex(embed / 2 + 1);
        {
            std::lock_guard lock(planner_mutex());
            forward.reset(fftw_plan_dft_r2c_1d(len, real, freq, kPlanFlags));
            backward.reset(fftw_plan_dft_c2r_1d(len, freq, real, kPlanFlags));
        }
        fftw_free(real);
        fftw_free(freq);
    }

    Plan forward;
    Plan backward;
};

}  // namespace detail

namespace {

struct Workspace {
    explicit Workspace(std::size_t n) : real(2 * n), freq(n + 1) {}
    std::vector<double> real;
    std::vector<std::complex<double>> freq;
};

auto as_fftw(std::complex<double>* p) -> fftw_complex*
{
    return reinterpret_cast<fftw_complex*>(p);
}

}  // namespace

SymmetricToeplitz::SymmetricToeplitz(std::vector<double> first_col) : col_(std::move(first_col))
{
    if (col_.empty()) {
        throw SizeError("toeplitz: empty first column");
    }
    const std::size_t n = col_.size();
    plans_ = std::make_shared<const detail::ToeplitzPlans>(2 * n);

    Workspace ws(n);
    ws.real[0] = col_[0];
    ws.real[n] = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        ws.real[k] = col_[k];
        ws.real[2 * n - k] = col_[k];
    }
    fftw_execute_dft_r2c(plans_->forward.get(), ws.real.data(), as_fftw(ws.freq.data()));
    spectrum_.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        spectrum_[k] = ws.freq[k].real();
    }
}

void SymmetricToeplitz::matvec(std::span<const double> in, std::span<double> out) const
{
    apply_blocks(in, out, 1);
}

void SymmetricToeplitz::apply_blocks(std::span<const double> in, std::span<double> out,
                                     std::size_t count) const
{
    const std::size_t n = col_.size();
    if (in.size() != n * count || out.size() != n * count) {
        throw SizeError("toeplitz: expected " + std::to_string(n * count) + " entries, got " +
                        std::to_string(in.size()) + " -> " + std::to_string(out.size()));
    }
    Workspace ws(n);
    const double scale = 1.0 / static_cast<double>(2 * n);
    for (std::size_t blk = 0; blk < count; ++blk) {
        const double* src = in.data() + blk * n;
        std::copy(src, src + n, ws.real.begin());
        std::fill(ws.real.begin() + static_cast<std::ptrdiff_t>(n), ws.real.end(), 0.0);
        fftw_execute_dft_r2c(plans_->forward.get(), ws.real.data(), as_fftw(ws.freq.data()));
        for (std::size_t k = 0; k <= n; ++k) {
            ws.freq[k] *= spectrum_[k] * scale;
        }
        fftw_execute_dft_c2r(plans_->backward.get(), as_fftw(ws.freq.data()), ws.real.data());
        std::copy(ws.real.begin(), ws.real.begin() + static_cast<std::ptrdiff_t>(n),
                  out.data() + blk * n);
    }
}

SymmetricToeplitz SymmetricToeplitz::scaled(double factor) const
{
    std::vector<double> col = col_;
    for (double& c : col) {
        c *= factor;
    }
    return SymmetricToeplitz(std::move(col));
}

Eigen::MatrixXd SymmetricToeplitz::dense() const
{
    const auto n = static_cast<Eigen::Index>(col_.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            m(i, j) = entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    }
    return m;
}

SymmetricToeplitz toeplitz_from_grunwald(const GrunwaldSequence& g, std::size_t n)
{
    if (n == 0) {
        throw SizeError("toeplitz_from_grunwald: n must be positive");
    }
    if (g.size() < n + 1) {
        throw SizeError("toeplitz_from_grunwald: need " + std::to_string(n + 1) +
                        " coefficients, have " + std::to_string(g.size()));
    }
    std::vector<double> col(n);
    col[0] = 2.0 * g[1];
    if (n > 1) {
        col[1] = g[0] + g[2];
    }
    for (std::size_t k = 2; k < n; ++k) {
        col[k] = g[k + 1];
    }
    return SymmetricToeplitz(std::move(col));
}

std::vector<double> toeplitz_matvec(const SymmetricToeplitz& t, std::span<const double> v)
{
    std::vector<double> out(v.size());
    t.matvec(v, out);
    return out;
}

}  // namespace fracpen
