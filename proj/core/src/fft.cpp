#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace mfou {

namespace {
std::mutex& planner_lock() {
    static std::mutex m;
    return m;
}
}  // namespace

std::vector<std::complex<double>> real_fft(const std::vector<double>& x) {
    const int n = int(x.size());
    std::vector<double> in(x);
    std::vector<std::complex<double>> out(std::size_t(n / 2 + 1));
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> g(planner_lock());
        plan = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                    FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> g(planner_lock());
        fftw_destroy_plan(plan);
    }
    return out;
}

void complex_fft_inplace(std::vector<std::complex<double>>& x) {
    const int n = int(x.size());
    auto* p = reinterpret_cast<fftw_complex*>(x.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> g(planner_lock());
        plan = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> g(planner_lock());
        fftw_destroy_plan(plan);
    }
}

}  // namespace mfou
