#include "nsfs/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <numbers>

#include "nsfs/error.hpp"

namespace nsfs {

namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

constexpr std::size_t kBatch = 8;
constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

template <class T>
AlignedBuffer<T>::AlignedBuffer(std::size_t count)
    : ptr_(static_cast<T*>(fftw_malloc(sizeof(T) * (count ? count : 1)))), size_(count) {
    if (!ptr_) throw Error("fftw_malloc failed for " + std::to_string(sizeof(T) * count) + " bytes");
}

template <class T>
void AlignedBuffer<T>::Free::operator()(T* p) const {
    fftw_free(p);
}

template <class T>
void AlignedBuffer<T>::fill(const T& v) {
    std::fill(ptr_.get(), ptr_.get() + size_, v);
}

template class AlignedBuffer<double>;
template class AlignedBuffer<std::complex<double>>;

// One axis pass: `outer` blocks of `stride` interleaved lines each. Lines are
// processed in batches of kBatch adjacent lines plus one remainder batch.
struct AxisPass {
    std::size_t outer = 0;
    std::size_t stride = 0;
    std::size_t block = 0;
    fftw_plan batch = nullptr;
    fftw_plan tail = nullptr;
    std::size_t tail_count = 0;
};

struct AxisFFT::Plans {
    // r2c / c2r along the last axis: lines are contiguous.
    fftw_plan r2c_batch = nullptr;
    fftw_plan r2c_tail = nullptr;
    fftw_plan c2r_batch = nullptr;
    fftw_plan c2r_tail = nullptr;
    std::size_t lines = 0;
    std::size_t tail_lines = 0;
    std::vector<AxisPass> forward_axes;
    std::vector<AxisPass> backward_axes;

    ~Plans() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        for (fftw_plan p : {r2c_batch, r2c_tail, c2r_batch, c2r_tail})
            if (p) fftw_destroy_plan(p);
        for (auto* axes : {&forward_axes, &backward_axes})
            for (auto& a : *axes) {
                if (a.batch) fftw_destroy_plan(a.batch);
                if (a.tail) fftw_destroy_plan(a.tail);
            }
    }
};

AxisFFT::AxisFFT(int rank, std::size_t length) : rank_(rank), m_(length), plans_(std::make_unique<Plans>()) {
    if (rank < 1) throw DomainError("AxisFFT rank must be >= 1");
    if (length < 2 || length % 2 != 0) throw DomainError("AxisFFT length must be even");
    const std::size_t h = half_length();
    std::size_t lines = 1;
    for (int a = 0; a + 1 < rank; ++a) lines *= m_;
    real_size_ = lines * m_;
    spectral_size_ = lines * h;

    const int n = static_cast<int>(m_);
    std::lock_guard<std::mutex> lock(planner_mutex());

    // Scratch arrays only used for planning (FFTW_ESTIMATE does not touch them).
    const std::size_t plan_lines = std::min(lines, kBatch);
    RealBuffer rscratch(plan_lines * m_);
    ComplexBuffer cscratch(std::max(plan_lines * h, (m_ - 1) * std::max<std::size_t>(spectral_size_ / m_, 1) + kBatch));

    Plans& p = *plans_;
    p.lines = lines;
    p.tail_lines = lines % kBatch;
    const auto make_r2c = [&](std::size_t howmany) {
        return fftw_plan_many_dft_r2c(1, &n, static_cast<int>(howmany), rscratch.data(), nullptr, 1, n,
                                      as_fftw(cscratch.data()), nullptr, 1, static_cast<int>(h), kFlags);
    };
    const auto make_c2r = [&](std::size_t howmany) {
        return fftw_plan_many_dft_c2r(1, &n, static_cast<int>(howmany), as_fftw(cscratch.data()), nullptr, 1,
                                      static_cast<int>(h), rscratch.data(), nullptr, 1, n, kFlags);
    };
    if (lines >= kBatch) {
        p.r2c_batch = make_r2c(kBatch);
        p.c2r_batch = make_c2r(kBatch);
    }
    if (p.tail_lines) {
        p.r2c_tail = make_r2c(p.tail_lines);
        p.c2r_tail = make_c2r(p.tail_lines);
    }

    // Complex passes along axes rank-2 ... 0 of the M^{rank-1} x h layout.
    for (int axis = rank - 2; axis >= 0; --axis) {
        AxisPass pass;
        std::size_t stride = h;
        for (int a = rank - 2; a > axis; --a) stride *= m_;
        pass.stride = stride;
        pass.block = stride * m_;
        pass.outer = spectral_size_ / pass.block;
        pass.tail_count = stride % kBatch;
        const auto make = [&](std::size_t howmany, int sign) {
            return fftw_plan_many_dft(1, &n, static_cast<int>(howmany), as_fftw(cscratch.data()), nullptr,
                                      static_cast<int>(stride), 1, as_fftw(cscratch.data()), nullptr,
                                      static_cast<int>(stride), 1, sign, kFlags);
        };
        AxisPass fwd = pass;
        AxisPass bwd = pass;
        if (stride >= kBatch) {
            fwd.batch = make(kBatch, FFTW_FORWARD);
            bwd.batch = make(kBatch, FFTW_BACKWARD);
        }
        if (pass.tail_count) {
            fwd.tail = make(pass.tail_count, FFTW_FORWARD);
            bwd.tail = make(pass.tail_count, FFTW_BACKWARD);
        }
        p.forward_axes.push_back(fwd);
        p.backward_axes.insert(p.backward_axes.begin(), bwd);
    }
}

AxisFFT::~AxisFFT() = default;
AxisFFT::AxisFFT(AxisFFT&&) noexcept = default;
AxisFFT& AxisFFT::operator=(AxisFFT&&) noexcept = default;

namespace {

void run_pass(const AxisPass& pass, std::complex<double>* spec, Exec exec) {
    const std::size_t full = pass.stride / kBatch;
    const std::size_t per_outer = full + (pass.tail_count ? 1 : 0);
    const std::size_t jobs = pass.outer * per_outer;
    for_each_index(jobs, exec, [&](std::size_t job) {
        const std::size_t o = job / per_outer;
        const std::size_t b = job % per_outer;
        std::complex<double>* base = spec + o * pass.block + b * kBatch;
        if (b < full)
            fftw_execute_dft(pass.batch, as_fftw(base), as_fftw(base));
        else
            fftw_execute_dft(pass.tail, as_fftw(base), as_fftw(base));
    });
}

}  // namespace

void AxisFFT::forward(const double* real, std::complex<double>* spec, Exec exec) const {
    const Plans& p = *plans_;
    const std::size_t h = half_length();
    const std::size_t full = p.lines / kBatch;
    const std::size_t jobs = full + (p.tail_lines ? 1 : 0);
    for_each_index(jobs, exec, [&](std::size_t job) {
        const std::size_t first = job * kBatch;
        // FFTW's r2c interface takes a non-const input; out-of-place r2c preserves it.
        auto* in = const_cast<double*>(real + first * m_);
        auto* out = as_fftw(spec + first * h);
        fftw_execute_dft_r2c(job < full ? p.r2c_batch : p.r2c_tail, in, out);
    });
    for (const auto& pass : p.forward_axes) run_pass(pass, spec, exec);
}

void AxisFFT::inverse(std::complex<double>* spec, double* real, Exec exec) const {
    const Plans& p = *plans_;
    for (const auto& pass : p.backward_axes) run_pass(pass, spec, exec);
    const std::size_t h = half_length();
    const std::size_t full = p.lines / kBatch;
    const std::size_t jobs = full + (p.tail_lines ? 1 : 0);
    for_each_index(jobs, exec, [&](std::size_t job) {
        const std::size_t first = job * kBatch;
        fftw_execute_dft_c2r(job < full ? p.c2r_batch : p.c2r_tail, as_fftw(spec + first * h), real + first * m_);
    });
}

namespace reference {

namespace {

std::size_t smallest_factor(std::size_t n) {
    for (std::size_t f = 2; f * f <= n; ++f)
        if (n % f == 0) return f;
    return n;
}

void dft_recursive(std::span<std::complex<double>> x, int sign) {
    const std::size_t n = x.size();
    if (n <= 1) return;
    const std::size_t p = smallest_factor(n);
    const double base = sign * 2.0 * std::numbers::pi / static_cast<double>(n);
    if (p == n) {
        std::vector<std::complex<double>> out(n);
        for (std::size_t k = 0; k < n; ++k) {
            std::complex<double> acc = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                acc += x[j] * std::polar(1.0, base * static_cast<double>((j * k) % n));
            out[k] = acc;
        }
        std::copy(out.begin(), out.end(), x.begin());
        return;
    }
    const std::size_t m = n / p;
    std::vector<std::vector<std::complex<double>>> sub(p, std::vector<std::complex<double>>(m));
    for (std::size_t r = 0; r < p; ++r) {
        for (std::size_t j = 0; j < m; ++j) sub[r][j] = x[j * p + r];
        dft_recursive(sub[r], sign);
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t r = 0; r < p; ++r)
            acc += sub[r][k % m] * std::polar(1.0, base * static_cast<double>((r * k) % n));
        x[k] = acc;
    }
}

}  // namespace

void dft(std::span<std::complex<double>> data, int sign) { dft_recursive(data, sign); }

void dft_nd(std::span<std::complex<double>> data, int rank, std::size_t length, int sign) {
    std::size_t total = 1;
    for (int a = 0; a < rank; ++a) total *= length;
    if (data.size() != total) throw DomainError("dft_nd: data size does not match length^rank");
    std::vector<std::complex<double>> line(length);
    std::size_t stride = 1;
    for (int axis = rank - 1; axis >= 0; --axis) {
        const std::size_t block = stride * length;
        for (std::size_t outer = 0; outer < total / block; ++outer)
            for (std::size_t inner = 0; inner < stride; ++inner) {
                const std::size_t base = outer * block + inner;
                for (std::size_t k = 0; k < length; ++k) line[k] = data[base + k * stride];
                dft(line, sign);
                for (std::size_t k = 0; k < length; ++k) data[base + k * stride] = line[k];
            }
        stride = block;
    }
}

}  // namespace reference

}  // namespace nsfs
