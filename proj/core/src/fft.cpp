#include "wavepacket/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace wpk {

namespace {

// One cached in-place plan per (size, direction), executed under a lock on a
// plan-owned aligned buffer. Copy-in/copy-out is cheap next to the transform
// and keeps results independent of caller alignment.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    void execute(std::vector<Complex>& v, int sign) {
        const std::size_t n = v.size();
        std::lock_guard<std::mutex> lock(mutex_);
        Entry& e = entry(n, sign);
        auto* buf = reinterpret_cast<Complex*>(e.buffer);
        std::copy(v.begin(), v.end(), buf);
        fftw_execute(e.plan);
        std::copy(buf, buf + n, v.begin());
    }

private:
    struct Entry {
        fftw_plan plan = nullptr;
        fftw_complex* buffer = nullptr;
    };

    Entry& entry(std::size_t n, int sign) {
        const auto key = std::make_pair(n, sign);
        auto it = entries_.find(key);
        if (it != entries_.end()) return it->second;
        Entry e;
        e.buffer = fftw_alloc_complex(n);
        if (!e.buffer) throw std::bad_alloc();
        e.plan = fftw_plan_dft_1d(static_cast<int>(n), e.buffer, e.buffer, sign, FFTW_ESTIMATE);
        if (!e.plan) {
            fftw_free(e.buffer);
            throw std::runtime_error("fft: plan creation failed");
        }
        return entries_.emplace(key, e).first->second;
    }

    ~PlanCache() {
        for (auto& [key, e] : entries_) {
            fftw_destroy_plan(e.plan);
            fftw_free(e.buffer);
        }
    }

    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, Entry> entries_;
};

} // namespace

void fft_forward(std::vector<Complex>& v) {
    if (v.empty()) throw std::invalid_argument("fft_forward: empty input");
    PlanCache::instance().execute(v, FFTW_FORWARD);
}

void fft_inverse(std::vector<Complex>& v) {
    if (v.empty()) throw std::invalid_argument("fft_inverse: empty input");
    PlanCache::instance().execute(v, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(v.size());
    for (Complex& z : v) z *= scale;
}

std::vector<double> fft_frequencies(std::size_t n, double spacing) {
    std::vector<double> freq(n);
    const double d = 2.0 * M_PI / (static_cast<double>(n) * spacing);
    const std::size_t half = n / 2;
    for (std::size_t k = 0; k < n; ++k) {
        const double signed_k =
            (k < half) ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
        freq[k] = signed_k * d;
    }
    return freq;
}

} // namespace wpk
