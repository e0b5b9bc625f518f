#include "fracpen/sine_transform.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "fftw_plan.hpp"
#include "fracpen/errors.hpp"

namespace fracpen {

namespace detail {

// DST-I through a real FFT of the odd extension [0, x, 0, -reverse(x)] of
// length L = 2(n+1): the unnormalized transform is -Im(X_k), k = 1..n.
// FFTW's own RODFT00 is noticeably slower when n+1 has a large prime factor
// (n = 256 gives L = 2 * 257), which is the common power-of-two case here.
struct SinePass {
    int n = 0;
    int howmany = 0;
    int stride = 1;  // between entries of one transform
    int dist = 1;    // between consecutive transforms
    Plan plan;

    [[nodiscard]] int ext_len() const noexcept { return 2 * (n + 1); }
    [[nodiscard]] int spec_len() const noexcept { return n + 2; }

    // Unnormalized transform of the howmany vectors in data, in place.
    void run(double* data) const
    {
        const int len = ext_len();
        const int clen = spec_len();
        // Per-thread scratch keeps concurrent applies independent without
        // reallocating megabytes on every call.
        thread_local std::vector<double> ext;
        thread_local std::vector<std::complex<double>> spec;
        ext.resize(static_cast<std::size_t>(len) * static_cast<std::size_t>(howmany));
        spec.resize(static_cast<std::size_t>(clen) * static_cast<std::size_t>(howmany));
        // Walk the caller's buffer in memory order: transform-major for
        // contiguous vectors, entry-major for the strided (row) pass.
        const auto at = [&](int b, int i) { return static_cast<std::ptrdiff_t>(b) * dist + static_cast<std::ptrdiff_t>(i) * stride; };
        const auto gather = [&](int b, int i) {
            const double xi = data[at(b, i)];
            double* e = ext.data() + static_cast<std::ptrdiff_t>(b) * len;
            e[i + 1] = xi;
            e[len - 1 - i] = -xi;
        };
        const auto scatter = [&](int b, int k) {
            data[at(b, k)] = -spec[static_cast<std::size_t>(b) * static_cast<std::size_t>(clen) + static_cast<std::size_t>(k) + 1].imag();
        };
        const bool contiguous = stride == 1;
        const auto sweep = [&](const auto& f) {
            if (contiguous) {
                for (int b = 0; b < howmany; ++b) {
                    for (int i = 0; i < n; ++i) {
                        f(b, i);
                    }
                }
            } else {
                for (int i = 0; i < n; ++i) {
                    for (int b = 0; b < howmany; ++b) {
                        f(b, i);
                    }
                }
            }
        };
        for (int b = 0; b < howmany; ++b) {
            ext[static_cast<std::size_t>(b) * static_cast<std::size_t>(len)] = 0.0;
            ext[static_cast<std::size_t>(b) * static_cast<std::size_t>(len) + static_cast<std::size_t>(n) + 1] = 0.0;
        }
        sweep(gather);
        fftw_execute_dft_r2c(plan.get(), ext.data(), reinterpret_cast<fftw_complex*>(spec.data()));
        sweep(scatter);
    }
};

struct SinePlans {
    SinePass first;
    SinePass second;
};

}  // namespace detail

namespace {

detail::SinePass make_pass(int n, int howmany, int stride, int dist)
{
    detail::SinePass pass;
    pass.n = n;
    pass.howmany = howmany;
    pass.stride = stride;
    pass.dist = dist;
    int len = pass.ext_len();
    const int clen = pass.spec_len();
    double* buf = fftw_alloc_real(static_cast<std::size_t>(len) * static_cast<std::size_t>(howmany));
    fftw_complex* spec = fftw_alloc_complex(static_cast<std::size_t>(clen) * static_cast<std::size_t>(howmany));
    {
        std::lock_guard lock(detail::planner_mutex());
        pass.plan.reset(fftw_plan_many_dft_r2c(1, &len, howmany, buf, nullptr, 1, len, spec, nullptr, 1, clen,
                                               detail::kPlanFlags));
    }
    fftw_free(spec);
    fftw_free(buf);
    return pass;
}

}  // namespace

SineTransform::SineTransform(std::size_t n)
    : n_(n), scale_(1.0 / std::sqrt(2.0 * static_cast<double>(n + 1)))
{
    if (n == 0) {
        throw SizeError("sine transform: n must be positive");
    }
    auto plans = std::make_shared<detail::SinePlans>();
    plans->first = make_pass(static_cast<int>(n), 1, 1, static_cast<int>(n));
    plans_ = std::move(plans);
}

void SineTransform::apply(std::span<const double> in, std::span<double> out) const
{
    if (in.size() != n_ || out.size() != n_) {
        throw SizeError("sine transform: expected length " + std::to_string(n_));
    }
    if (in.data() != out.data()) {
        std::copy(in.begin(), in.end(), out.begin());
    }
    plans_->first.run(out.data());
    for (double& x : out) {
        x *= scale_;
    }
}

std::vector<double> dst1_apply(const SineTransform& s, std::span<const double> v)
{
    std::vector<double> out(v.size());
    s.apply(v, out);
    return out;
}

SineTransform2D::SineTransform2D(std::size_t n1, std::size_t n2)
    : n1_(n1),
      n2_(n2),
      scale_(1.0 / (std::sqrt(2.0 * static_cast<double>(n1 + 1)) *
                    std::sqrt(2.0 * static_cast<double>(n2 + 1))))
{
    if (n1 == 0 || n2 == 0) {
        throw SizeError("2-D sine transform: dimensions must be positive");
    }
    const int i1 = static_cast<int>(n1);
    const int i2 = static_cast<int>(n2);
    auto plans = std::make_shared<detail::SinePlans>();
    plans->first = make_pass(i1, i2, 1, i1);   // columns
    plans->second = make_pass(i2, i1, i1, 1);  // rows
    plans_ = std::move(plans);
}

void SineTransform2D::apply_inplace(std::span<double> v) const
{
    if (v.size() != n1_ * n2_) {
        throw SizeError("2-D sine transform: expected length " + std::to_string(n1_ * n2_));
    }
    plans_->first.run(v.data());
    plans_->second.run(v.data());
    for (double& x : v) {
        x *= scale_;
    }
}

}  // namespace fracpen
