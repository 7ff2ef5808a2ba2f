#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace hydroradar::detail {

namespace {

// FFTW plan creation is not thread-safe; execution via fftw_execute_dft on
// caller-owned buffers is. One cached in-place plan per transform size.
std::mutex plan_mutex;

struct PlanCache {
    std::map<int, fftw_plan> plans;
    ~PlanCache() {
        for (auto& [n, plan] : plans) fftw_destroy_plan(plan);
    }
};

fftw_plan plan_for(int n) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    static PlanCache cache;
    auto it = cache.plans.find(n);
    if (it != cache.plans.end()) return it->second;
    std::vector<fftw_complex> scratch(static_cast<std::size_t>(n));
    fftw_plan plan = fftw_plan_dft_1d(n, scratch.data(), scratch.data(),
                                      FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw std::runtime_error("fftw_plan_dft_1d failed");
    cache.plans.emplace(n, plan);
    return plan;
}

}  // namespace

void fft_inplace(std::complex<double>* data, int n) {
    if (n <= 0) throw std::invalid_argument("fft_inplace: n must be positive");
    if (n == 1) return;
    fftw_plan plan = plan_for(n);
    auto* raw = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, raw, raw);
}

}  // namespace hydroradar::detail
