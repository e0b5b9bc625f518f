#pragma once

#include <fftw3.h>

#include <memory>
#include <mutex>

namespace fracpen::detail {

// FFTW's planner is not re-entrant; execution of a finished plan on new arrays is.
inline std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const noexcept
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(p);
    }
};

using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// Every plan is made with FFTW_UNALIGNED so that it can be executed on caller
// buffers (std::vector storage) through the new-array execute interface.
inline constexpr unsigned kPlanFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

}  // namespace fracpen::detail
