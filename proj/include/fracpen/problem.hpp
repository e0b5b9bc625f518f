#pragma once

#include <functional>

#include "fracpen/discretization.hpp"

namespace fracpen {

/// Problem data on the physical domain. The stepper zero-extends u0 and the
/// source outside the region, so the callables only need to be valid inside.
struct ProblemDef {
    RegionPredicate region;
    std::function<double(double x, double y)> u0;
    std::function<double(double u, double x, double y, double t)> source;
    /// Optional; enables error reporting.
    std::function<double(double x, double y, double t)> exact;
};

}  // namespace fracpen
