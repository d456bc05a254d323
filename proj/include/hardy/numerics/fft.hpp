// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <mutex>
#include <new>
#include <span>

namespace hardy::numerics {

namespace detail {
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

/// Unnormalized 1D complex DFT of fixed length, X_k = sum_j x_j e^{sign 2 pi i jk/n}.
/// Owns aligned buffers; one plan per object. Planning is serialized because
/// the FFTW planner is not thread-safe; execute() on distinct objects is.
class FftPlan {
public:
    enum class Sign { negative = FFTW_FORWARD, positive = FFTW_BACKWARD };

    FftPlan(int n, Sign sign) : n_(n) {
        buffer_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(n)));
        if (buffer_ == nullptr) throw std::bad_alloc();
        std::lock_guard lock(detail::fftw_planner_mutex());
        plan_ = fftw_plan_dft_1d(n, buffer_, buffer_, static_cast<int>(sign), FFTW_ESTIMATE);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    ~FftPlan() {
        {
            std::lock_guard lock(detail::fftw_planner_mutex());
            fftw_destroy_plan(plan_);
        }
        fftw_free(buffer_);
    }

    int size() const { return n_; }

    void execute(std::span<std::complex<double>> data) {
        static_assert(sizeof(std::complex<double>) == sizeof(fftw_complex));
        std::memcpy(buffer_, data.data(), sizeof(fftw_complex) * static_cast<std::size_t>(n_));
        fftw_execute(plan_);
        std::memcpy(static_cast<void*>(data.data()), buffer_, sizeof(fftw_complex) * static_cast<std::size_t>(n_));
    }

private:
    int n_;
    fftw_complex* buffer_ = nullptr;
    fftw_plan plan_ = nullptr;
};

}  // namespace hardy::numerics
