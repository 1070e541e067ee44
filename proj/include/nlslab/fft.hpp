#pragma once
// Thin FFTW wrapper. Plans are cached per (size, direction) and created under a
// mutex because the FFTW planner is not reentrant; execution uses the
// new-array interface so the same plan can be shared between threads.

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <fftw3.h>

namespace nlslab {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using rvec = std::vector<double>;

namespace detail {

class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(std::size_t n, int sign, bool inplace) {
        std::lock_guard<std::mutex> lock(mtx_);
        auto key = std::make_tuple(n, sign, inplace);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        // FFTW_ESTIMATE never touches the arrays, and UNALIGNED lets any
        // std::vector storage be passed to fftw_execute_dft later.
        auto* in = fftw_alloc_complex(n);
        auto* out = inplace ? in : fftw_alloc_complex(n);
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(in);
        if (!inplace) fftw_free(out);
        if (!p) throw std::runtime_error("fftw plan creation failed");
        plans_.emplace(key, p);
        return p;
    }

    ~PlanCache() {
        for (auto& kv : plans_) fftw_destroy_plan(kv.second);
    }

private:
    PlanCache() = default;
    std::mutex mtx_;
    std::map<std::tuple<std::size_t, int, bool>, fftw_plan> plans_;
};

}  // namespace detail

// Unnormalised DFT: out_k = sum_j in_j exp(-2 pi i j k / n).
inline void dft_forward(const cplx* in, cplx* out, std::size_t n) {
    fftw_plan p = detail::PlanCache::instance().get(n, FFTW_FORWARD, in == out);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

// Unnormalised inverse DFT: out_j = sum_k in_k exp(+2 pi i j k / n).
inline void dft_backward(const cplx* in, cplx* out, std::size_t n) {
    fftw_plan p = detail::PlanCache::instance().get(n, FFTW_BACKWARD, in == out);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

inline void dft_forward_inplace(cvec& v) { dft_forward(v.data(), v.data(), v.size()); }
inline void dft_backward_inplace(cvec& v) { dft_backward(v.data(), v.data(), v.size()); }

}  // namespace nlslab
