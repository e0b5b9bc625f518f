#include "fracpen/example1.hpp"

#include <algorithm>
#include <cmath>

#include "fracpen/errors.hpp"

namespace fracpen {

namespace {

// h(alpha, ., .) with the Gamma factors evaluated once.
class RlKernel {
public:
    explicit RlKernel(double alpha)
        : alpha_(alpha), c4_(24.0 / std::tgamma(5.0 - alpha)), c3_(24.0 / std::tgamma(4.0 - alpha)),
          c2_(8.0 / std::tgamma(3.0 - alpha))
    {
    }

    double operator()(double s, double d) const
    {
        if (s == 0.0) {
            return 0.0;
        }
        const double p2 = std::pow(s, 2.0 - alpha_);
        return p2 * (c4_ * s * s - c3_ * d * s + c2_ * d * d);
    }

private:
    double alpha_;
    double c4_;
    double c3_;
    double c2_;
};

}  // namespace

double example1_h(double alpha, double s, double d)
{
    return RlKernel(alpha)(s, d);
}

ProblemDef example1_problem(const Example1Params& p)
{
    if (!(p.a > 0.0) || !(p.b > 0.0)) {
        throw ParameterError("ellipse benchmark: semi-axes a, b must be positive");
    }
    if (!(p.kx > 0.0) || !(p.ky > 0.0)) {
        throw ParameterError("ellipse benchmark: diffusivities must be positive");
    }
    const double ca1 = riesz_constant(p.alpha1);
    const double ca2 = riesz_constant(p.alpha2);
    const double a = p.a;
    const double b = p.b;

    const auto level = [a, b](double x, double y) {
        return (x - a) * (x - a) / (a * a) + (y - b) * (y - b) / (b * b);
    };

    ProblemDef prob;
    prob.region = [level](double x, double y) { return level(x, y) <= 1.0; };
    prob.exact = [level](double x, double y, double t) {
        const double q = level(x, y) - 1.0;
        return std::exp(-t) * q * q;
    };
    prob.u0 = [exact = prob.exact](double x, double y) { return exact(x, y, 0.0); };

    // Along a horizontal chord of half-width dy = a sqrt(1 - (y-b)^2/b^2) the
    // solution is e^{-t} s^2 (s - 2 dy)^2 / a^4 in the distance s from either end,
    // so each one-sided derivative is e^{-t} h(alpha1, s, dy) / a^4. Same in y.
    const RlKernel hx(p.alpha1);
    const RlKernel hy(p.alpha2);
    prob.source = [=](double u, double x, double y, double t) {
        const double dy = a * std::sqrt(std::max(0.0, 1.0 - (y - b) * (y - b) / (b * b)));
        const double dx = b * std::sqrt(std::max(0.0, 1.0 - (x - a) * (x - a) / (a * a)));
        const double sl = std::max(0.0, x - a + dy);
        const double sr = std::max(0.0, a + dy - x);
        const double tl = std::max(0.0, y - b + dx);
        const double tr = std::max(0.0, b + dx - y);
        const double decay = std::exp(-t);
        const double riesz_x =
            ca1 * decay / std::pow(a, 4) * (hx(sl, dy) + hx(sr, dy));
        const double riesz_y =
            ca2 * decay / std::pow(b, 4) * (hy(tl, dx) + hy(tr, dx));
        return -p.kx * riesz_x - p.ky * riesz_y - u;
    };
    return prob;
}

GridSpec example1_grid(const Example1Params& p, std::size_t n1, std::size_t n2, std::size_t m, double T)
{
    GridSpec grid{0.0, 2.0 * p.a, 0.0, 2.0 * p.b, n1, n2, m, T};
    grid.validate();
    return grid;
}

}  // namespace fracpen
