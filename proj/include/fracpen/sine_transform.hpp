#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fracpen {

namespace detail {
struct SinePlans;
}

/// Orthonormal DST-I: [S_n]_{ij} = sqrt(2/(n+1)) sin(pi i j / (n+1)), 1 <= i,j <= n.
///
/// S_n is symmetric and orthogonal, so it is its own inverse. Plans are built
/// once; apply() runs on caller buffers and is safe to call concurrently.
class SineTransform {
public:
    explicit SineTransform(std::size_t n);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }

    /// out = S_n in. Spans may alias.
    void apply(std::span<const double> in, std::span<double> out) const;

private:
    std::size_t n_;
    double scale_;
    std::shared_ptr<const detail::SinePlans> plans_;
};

[[nodiscard]] std::vector<double> dst1_apply(const SineTransform& s, std::span<const double> v);

/// S_{n2} (x) S_{n1} acting on an n1 x n2 grid vector stored x-fastest.
///
/// Realized as one batched pass over the n2 columns (contiguous, length n1)
/// followed by one batched pass over the n1 rows (stride n1, length n2).
class SineTransform2D {
public:
    SineTransform2D(std::size_t n1, std::size_t n2);

    [[nodiscard]] std::size_t n1() const noexcept { return n1_; }
    [[nodiscard]] std::size_t n2() const noexcept { return n2_; }

    /// In-place transform of a length n1*n2 buffer.
    void apply_inplace(std::span<double> v) const;

private:
    std::size_t n1_;
    std::size_t n2_;
    double scale_;
    std::shared_ptr<const detail::SinePlans> plans_;
};

}  // namespace fracpen
