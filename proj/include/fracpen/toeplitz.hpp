#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fracpen/grunwald.hpp"

namespace fracpen {

namespace detail {
struct ToeplitzPlans;
}

/// Symmetric Toeplitz matrix T with T(i,j) = t_{|i-j|}, stored by first column.
///
/// Products use the circulant embedding of size 2n with first column
/// [t_0..t_{n-1}, 0, t_{n-1}..t_1]. That circulant is symmetric, so its
/// spectrum is real; only the n+1 non-redundant values are cached.
class SymmetricToeplitz {
public:
    explicit SymmetricToeplitz(std::vector<double> first_col);

    [[nodiscard]] std::size_t size() const noexcept { return col_.size(); }
    [[nodiscard]] std::span<const double> first_col() const noexcept { return col_; }
    [[nodiscard]] double entry(std::size_t i, std::size_t j) const
    {
        return col_[i > j ? i - j : j - i];
    }
    [[nodiscard]] std::span<const double> embedded_spectrum() const noexcept { return spectrum_; }

    /// out = T * in. Both spans have length n; they may alias.
    void matvec(std::span<const double> in, std::span<double> out) const;

    /// Applies T to `count` contiguous length-n blocks: out[k*n..] = T * in[k*n..].
    void apply_blocks(std::span<const double> in, std::span<double> out, std::size_t count) const;

    /// Returns a copy scaled by `factor`.
    [[nodiscard]] SymmetricToeplitz scaled(double factor) const;

    [[nodiscard]] Eigen::MatrixXd dense() const;

private:
    std::vector<double> col_;
    std::vector<double> spectrum_;
    std::shared_ptr<const detail::ToeplitzPlans> plans_;
};

/// t_0 = 2 g_1, t_1 = g_0 + g_2, t_k = g_{k+1} for k >= 2: the matrix G_n of the
/// shifted Grünwald two-sided stencil. Requires g.size() >= n + 1.
[[nodiscard]] SymmetricToeplitz toeplitz_from_grunwald(const GrunwaldSequence& g, std::size_t n);

[[nodiscard]] std::vector<double> toeplitz_matvec(const SymmetricToeplitz& t, std::span<const double> v);

}  // namespace fracpen
