#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "nsfs/parallel.hpp"

namespace nsfs {

/// 64-byte aligned buffer allocated through FFTW.
template <class T>
class AlignedBuffer {
public:
    AlignedBuffer() = default;
    explicit AlignedBuffer(std::size_t count);
    T* data() { return ptr_.get(); }
    const T* data() const { return ptr_.get(); }
    std::size_t size() const { return size_; }
    T& operator[](std::size_t i) { return ptr_[i]; }
    const T& operator[](std::size_t i) const { return ptr_[i]; }
    std::span<T> span() { return {ptr_.get(), size_}; }
    std::span<const T> span() const { return {ptr_.get(), size_}; }
    void fill(const T& v);

private:
    struct Free {
        void operator()(T* p) const;
    };
    std::unique_ptr<T[], Free> ptr_;
    std::size_t size_ = 0;
};

using RealBuffer = AlignedBuffer<double>;
using ComplexBuffer = AlignedBuffer<std::complex<double>>;

/// Rank-n real-to-complex transform on an M^n cube, realized as successive
/// 1-D transforms: r2c along the last axis, then complex transforms along the
/// remaining axes. The spectral layout is M^{n-1} x (M/2 + 1), row-major.
///
/// Forward is unnormalized; inverse is unnormalized as well, so
/// inverse(forward(x)) = M^n x. Plans are created once with FFTW_ESTIMATE,
/// which keeps results reproducible; execution over lines is OpenMP-parallel
/// or serial and both give identical bits.
class AxisFFT {
public:
    AxisFFT(int rank, std::size_t length);
    ~AxisFFT();
    AxisFFT(const AxisFFT&) = delete;
    AxisFFT& operator=(const AxisFFT&) = delete;
    AxisFFT(AxisFFT&&) noexcept;
    AxisFFT& operator=(AxisFFT&&) noexcept;

    int rank() const { return rank_; }
    std::size_t length() const { return m_; }
    std::size_t half_length() const { return m_ / 2 + 1; }
    std::size_t real_size() const { return real_size_; }
    std::size_t spectral_size() const { return spectral_size_; }

    /// real (real_size, preserved) -> spec (spectral_size).
    void forward(const double* real, std::complex<double>* spec, Exec exec = Exec::parallel) const;
    /// spec (spectral_size, destroyed) -> real (real_size).
    void inverse(std::complex<double>* spec, double* real, Exec exec = Exec::parallel) const;

private:
    struct Plans;
    int rank_ = 0;
    std::size_t m_ = 0;
    std::size_t real_size_ = 0;
    std::size_t spectral_size_ = 0;
    std::unique_ptr<Plans> plans_;
};

namespace reference {

/// Serial mixed-radix complex DFT of arbitrary length (recursive
/// Cooley-Tukey on the smallest prime factor, direct sum for primes).
/// sign = -1 forward, +1 backward; unnormalized.
void dft(std::span<std::complex<double>> data, int sign);

/// Full complex rank-n DFT on an M^n cube, one axis at a time.
void dft_nd(std::span<std::complex<double>> data, int rank, std::size_t length, int sign);

}  // namespace reference

}  // namespace nsfs
