#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fracpen/toeplitz.hpp"

namespace fracpen {

inline constexpr std::size_t kDefaultDenseCap = 4096;

/// Uniform grid on the rectangle (a,b) x (c,d) with n1 x n2 interior nodes and
/// m backward-Euler steps up to time T. Interior nodes are indexed 1..n1, 1..n2;
/// the rectangle boundary carries the homogeneous Dirichlet condition.
struct GridSpec {
    double a = 0.0;
    double b = 1.0;
    double c = 0.0;
    double d = 1.0;
    std::size_t n1 = 1;
    std::size_t n2 = 1;
    std::size_t m = 1;
    double T = 1.0;

    [[nodiscard]] double hx() const noexcept { return (b - a) / static_cast<double>(n1 + 1); }
    [[nodiscard]] double hy() const noexcept { return (d - c) / static_cast<double>(n2 + 1); }
    [[nodiscard]] double dt() const noexcept { return T / static_cast<double>(m); }
    [[nodiscard]] double x(std::size_t i) const noexcept { return a + static_cast<double>(i) * hx(); }
    [[nodiscard]] double y(std::size_t j) const noexcept { return c + static_cast<double>(j) * hy(); }
    [[nodiscard]] std::size_t unknowns() const noexcept { return n1 * n2; }

    /// Throws ParameterError for empty rectangles, zero sizes or T <= 0.
    void validate() const;
};

/// -1 / (2 cos(alpha pi / 2)), positive for alpha in (1,2).
[[nodiscard]] double riesz_constant(double alpha);

struct FractionalParams {
    double alpha1 = 1.5;
    double alpha2 = 1.5;
    double kx = 1.0;
    double ky = 1.0;
    double c_alpha1 = 0.0;
    double c_alpha2 = 0.0;
    double cx = 0.0;  // dt kx c_alpha1 / hx^alpha1
    double cy = 0.0;  // dt ky c_alpha2 / hy^alpha2
};

[[nodiscard]] FractionalParams make_fractional_params(double alpha1, double alpha2, double kx,
                                                      double ky, const GridSpec& grid);

using RegionPredicate = std::function<bool(double x, double y)>;

/// Indicator of the physical domain on the interior grid, plus the penalty dt/eta
/// applied at nodes outside it.
class DomainMask {
public:
    DomainMask(std::size_t n1, std::size_t n2, std::vector<std::uint8_t> inside, double eta, double dt);

    [[nodiscard]] std::size_t n1() const noexcept { return n1_; }
    [[nodiscard]] std::size_t n2() const noexcept { return n2_; }
    [[nodiscard]] double eta() const noexcept { return eta_; }
    [[nodiscard]] double penalty() const noexcept { return penalty_; }

    /// Zero-based (i, j); flat index is i + j * n1.
    [[nodiscard]] bool inside(std::size_t i, std::size_t j) const { return inside_[i + j * n1_] != 0; }
    [[nodiscard]] bool inside(std::size_t k) const { return inside_[k] != 0; }
    /// Phi_d entry: 1 outside the domain, 0 inside.
    [[nodiscard]] double phi(std::size_t k) const { return inside_[k] != 0 ? 0.0 : 1.0; }
    [[nodiscard]] double penalty_diagonal(std::size_t k) const { return phi(k) * penalty_; }
    [[nodiscard]] std::size_t count_inside() const noexcept;

private:
    std::size_t n1_;
    std::size_t n2_;
    std::vector<std::uint8_t> inside_;
    double eta_;
    double penalty_;
};

/// inside(i,j) = region(x_i, y_j) over interior nodes. Throws ParameterError for eta <= 0.
[[nodiscard]] DomainMask build_mask(const GridSpec& grid, const RegionPredicate& region, double eta);

/// M = I - A + D with A = I_{n2} (x) Ax + Ay (x) I_{n1}, acting on x-fastest grid vectors.
class PenalizedOperator {
public:
    PenalizedOperator(SymmetricToeplitz ax, SymmetricToeplitz ay, DomainMask mask);

    [[nodiscard]] std::size_t n1() const noexcept { return ax_.size(); }
    [[nodiscard]] std::size_t n2() const noexcept { return ay_.size(); }
    [[nodiscard]] std::size_t size() const noexcept { return n1() * n2(); }
    [[nodiscard]] const SymmetricToeplitz& ax() const noexcept { return ax_; }
    [[nodiscard]] const SymmetricToeplitz& ay() const noexcept { return ay_; }
    [[nodiscard]] const DomainMask& mask() const noexcept { return mask_; }

    /// out = A in (the Kronecker sum only). Spans must not alias.
    void apply_A(std::span<const double> in, std::span<double> out) const;

    /// out = M in. Spans must not alias.
    void apply(std::span<const double> in, std::span<double> out) const;

    [[nodiscard]] Eigen::MatrixXd dense_A(std::size_t cap = kDefaultDenseCap) const;
    [[nodiscard]] Eigen::MatrixXd dense_M(std::size_t cap = kDefaultDenseCap) const;

private:
    SymmetricToeplitz ax_;
    SymmetricToeplitz ay_;
    DomainMask mask_;
};

/// Ax = cx G_{n1}^{(alpha1)}, Ay = cy G_{n2}^{(alpha2)} with the given mask.
[[nodiscard]] PenalizedOperator make_penalized_operator(const GridSpec& grid,
                                                        const FractionalParams& fp,
                                                        DomainMask mask);

[[nodiscard]] std::vector<double> apply_M(const PenalizedOperator& op, std::span<const double> v);

[[nodiscard]] Eigen::MatrixXd dense_M(const PenalizedOperator& op, std::size_t cap = kDefaultDenseCap);

/// Dense I_{n2} (x) X + Y (x) I_{n1}.
[[nodiscard]] Eigen::MatrixXd kronecker_sum(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Throws SizeCapError when n exceeds cap.
void check_dense_cap(std::size_t n, std::size_t cap, const char* what);

}  // namespace fracpen
