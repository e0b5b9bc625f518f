#include "fracpen/discretization.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fracpen/errors.hpp"
#include "fracpen/grunwald.hpp"

namespace fracpen {

void GridSpec::validate() const
{
    if (!(b > a) || !(d > c)) {
        throw ParameterError("grid: rectangle must have b > a and d > c");
    }
    if (n1 == 0 || n2 == 0 || m == 0) {
        throw ParameterError("grid: n1, n2 and m must be positive");
    }
    if (!(T > 0.0)) {
        throw ParameterError("grid: final time must be positive");
    }
}

double riesz_constant(double alpha)
{
    if (!(alpha > 1.0 && alpha < 2.0)) {
        throw ParameterError("riesz constant: alpha must lie in (1,2), got " + std::to_string(alpha));
    }
    return -1.0 / (2.0 * std::cos(alpha * std::numbers::pi / 2.0));
}

FractionalParams make_fractional_params(double alpha1, double alpha2, double kx, double ky,
                                        const GridSpec& grid)
{
    grid.validate();
    if (!(kx > 0.0) || !(ky > 0.0)) {
        throw ParameterError("diffusivities kx, ky must be positive");
    }
    FractionalParams fp;
    fp.alpha1 = alpha1;
    fp.alpha2 = alpha2;
    fp.kx = kx;
    fp.ky = ky;
    fp.c_alpha1 = riesz_constant(alpha1);
    fp.c_alpha2 = riesz_constant(alpha2);
    fp.cx = grid.dt() * kx * fp.c_alpha1 / std::pow(grid.hx(), alpha1);
    fp.cy = grid.dt() * ky * fp.c_alpha2 / std::pow(grid.hy(), alpha2);
    return fp;
}

DomainMask::DomainMask(std::size_t n1, std::size_t n2, std::vector<std::uint8_t> inside, double eta,
                       double dt)
    : n1_(n1), n2_(n2), inside_(std::move(inside)), eta_(eta), penalty_(dt / eta)
{
    if (!(eta > 0.0)) {
        throw ParameterError("mask: eta must be positive");
    }
    if (!(dt > 0.0)) {
        throw ParameterError("mask: dt must be positive");
    }
    if (inside_.size() != n1 * n2) {
        throw SizeError("mask: indicator has " + std::to_string(inside_.size()) + " entries, expected " +
                        std::to_string(n1 * n2));
    }
}

std::size_t DomainMask::count_inside() const noexcept
{
    std::size_t count = 0;
    for (auto v : inside_) {
        count += v != 0 ? 1 : 0;
    }
    return count;
}

DomainMask build_mask(const GridSpec& grid, const RegionPredicate& region, double eta)
{
    grid.validate();
    if (!(eta > 0.0)) {
        throw ParameterError("build_mask: eta must be positive");
    }
    std::vector<std::uint8_t> inside(grid.unknowns());
    for (std::size_t j = 0; j < grid.n2; ++j) {
        for (std::size_t i = 0; i < grid.n1; ++i) {
            inside[i + j * grid.n1] = region(grid.x(i + 1), grid.y(j + 1)) ? 1 : 0;
        }
    }
    return DomainMask(grid.n1, grid.n2, std::move(inside), eta, grid.dt());
}

PenalizedOperator::PenalizedOperator(SymmetricToeplitz ax, SymmetricToeplitz ay, DomainMask mask)
    : ax_(std::move(ax)), ay_(std::move(ay)), mask_(std::move(mask))
{
    if (mask_.n1() != ax_.size() || mask_.n2() != ay_.size()) {
        throw SizeError("penalized operator: mask shape does not match Ax/Ay sizes");
    }
}

void PenalizedOperator::apply_A(std::span<const double> in, std::span<double> out) const
{
    const std::size_t n1 = this->n1();
    const std::size_t n2 = this->n2();
    if (in.size() != n1 * n2 || out.size() != n1 * n2) {
        throw SizeError("apply_A: expected length " + std::to_string(n1 * n2));
    }
    // Columns of the n1 x n2 array are contiguous: I (x) Ax.
    ax_.apply_blocks(in, out, n2);

    // Rows go through a transposed copy so that Ay also sees contiguous blocks.
    std::vector<double> rows(n1 * n2);
    for (std::size_t j = 0; j < n2; ++j) {
        for (std::size_t i = 0; i < n1; ++i) {
            rows[j + i * n2] = in[i + j * n1];
        }
    }
    ay_.apply_blocks(rows, rows, n1);
    for (std::size_t j = 0; j < n2; ++j) {
        for (std::size_t i = 0; i < n1; ++i) {
            out[i + j * n1] += rows[j + i * n2];
        }
    }
}

void PenalizedOperator::apply(std::span<const double> in, std::span<double> out) const
{
    apply_A(in, out);
    for (std::size_t k = 0; k < in.size(); ++k) {
        out[k] = (1.0 + mask_.penalty_diagonal(k)) * in[k] - out[k];
    }
}

void check_dense_cap(std::size_t n, std::size_t cap, const char* what)
{
    if (n > cap) {
        throw SizeCapError(std::string(what) + ": " + std::to_string(n) +
                           " unknowns exceed the dense cap of " + std::to_string(cap));
    }
}

Eigen::MatrixXd kronecker_sum(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y)
{
    const Eigen::Index n1 = x.rows();
    const Eigen::Index n2 = y.rows();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n1 * n2, n1 * n2);
    for (Eigen::Index j = 0; j < n2; ++j) {
        out.block(j * n1, j * n1, n1, n1) += x;
    }
    for (Eigen::Index p = 0; p < n2; ++p) {
        for (Eigen::Index q = 0; q < n2; ++q) {
            out.block(p * n1, q * n1, n1, n1).diagonal().array() += y(p, q);
        }
    }
    return out;
}

Eigen::MatrixXd PenalizedOperator::dense_A(std::size_t cap) const
{
    check_dense_cap(size(), cap, "dense_A");
    return kronecker_sum(ax_.dense(), ay_.dense());
}

Eigen::MatrixXd PenalizedOperator::dense_M(std::size_t cap) const
{
    Eigen::MatrixXd m = -dense_A(cap);
    for (std::size_t k = 0; k < size(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        m(kk, kk) += 1.0 + mask_.penalty_diagonal(k);
    }
    return m;
}

PenalizedOperator make_penalized_operator(const GridSpec& grid, const FractionalParams& fp,
                                          DomainMask mask)
{
    const auto g1 = grunwald_coeffs(fp.alpha1, grid.n1 + 1);
    const auto g2 = grunwald_coeffs(fp.alpha2, grid.n2 + 1);
    return PenalizedOperator(toeplitz_from_grunwald(g1, grid.n1).scaled(fp.cx),
                             toeplitz_from_grunwald(g2, grid.n2).scaled(fp.cy), std::move(mask));
}

std::vector<double> apply_M(const PenalizedOperator& op, std::span<const double> v)
{
    std::vector<double> out(v.size());
    op.apply(v, out);
    return out;
}

Eigen::MatrixXd dense_M(const PenalizedOperator& op, std::size_t cap)
{
    return op.dense_M(cap);
}

}  // namespace fracpen
