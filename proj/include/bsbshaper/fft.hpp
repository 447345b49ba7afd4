#pragma once

// Thin RAII wrapper over FFTW for in-place complex transforms. Planning
// in FFTW is not thread-safe, so plan creation and destruction are
// serialized; execution on distinct arrays may run concurrently.

#include <bsbshaper/errors.hpp>

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <vector>

namespace bsb {

enum class FftSign : int { negative = FFTW_FORWARD, positive = FFTW_BACKWARD };

namespace detail {

inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

class FftPlan {
public:
    FftPlan(std::vector<std::complex<double>>& data, FftSign sign) {
        auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
        std::lock_guard lock(fftw_planner_mutex());
        plan_ = fftw_plan_dft_1d(static_cast<int>(data.size()), ptr, ptr, static_cast<int>(sign), FFTW_ESTIMATE);
        if (plan_ == nullptr) throw Error("FFTW failed to create a plan");
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    ~FftPlan() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan_);
    }

    void execute() { fftw_execute(plan_); }

private:
    fftw_plan plan_ = nullptr;
};

}  // namespace detail

/// Unnormalized DFT: X_k = sum_j x_j exp(sign * 2 pi i jk / n).
inline void fft_in_place(std::vector<std::complex<double>>& data, FftSign sign) {
    if (data.empty()) return;
    // FFTW_ESTIMATE leaves the input untouched during planning.
    detail::FftPlan plan(data, sign);
    plan.execute();
}

}  // namespace bsb
