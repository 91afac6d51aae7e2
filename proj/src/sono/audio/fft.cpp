#include "sono/audio/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace sono::audio {
namespace {

struct FftwBuffer {
    explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {}
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    void* ptr;
};

// FFTW planning is not thread safe; execution with fresh arrays is.
class PlanCache {
public:
    ~PlanCache()
    {
        for (auto& [n, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    fftw_plan get(int n)
    {
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(n); it != plans_.end())
            return it->second;
        FftwBuffer in(sizeof(double) * static_cast<std::size_t>(n));
        FftwBuffer out(sizeof(fftw_complex) * static_cast<std::size_t>(n / 2 + 1));
        fftw_plan plan = fftw_plan_dft_r2c_1d(n, static_cast<double*>(in.ptr), static_cast<fftw_complex*>(out.ptr),
                                              FFTW_ESTIMATE);
        plans_.emplace(n, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<int, fftw_plan> plans_;
};

PlanCache& plan_cache()
{
    static PlanCache cache;
    return cache;
}

} // namespace

std::vector<std::complex<double>> real_dft(std::span<const double> signal)
{
    const auto n = signal.size();
    if (n == 0)
        return {};
    const std::size_t bins = n / 2 + 1;
    fftw_plan plan = plan_cache().get(static_cast<int>(n));

    FftwBuffer in(sizeof(double) * n);
    FftwBuffer out(sizeof(fftw_complex) * bins);
    auto* in_data = static_cast<double*>(in.ptr);
    auto* out_data = static_cast<fftw_complex*>(out.ptr);
    std::copy(signal.begin(), signal.end(), in_data);
    fftw_execute_dft_r2c(plan, in_data, out_data);

    std::vector<std::complex<double>> result(bins);
    for (std::size_t k = 0; k < bins; ++k)
        result[k] = {out_data[k][0], out_data[k][1]};
    return result;
}

} // namespace sono::audio
