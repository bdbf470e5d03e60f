#include "phasereg/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace phasereg {

namespace {

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// (rank, n0, n1, howmany, sign, kind)
using PlanKey = std::tuple<int, std::size_t, std::size_t, std::size_t, int, int>;

class PlanCache {
public:
    fftw_plan complex_plan(int rank, std::size_t n0, std::size_t n1, std::size_t howmany, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        const PlanKey key{rank, n0, n1, howmany, sign, 0};
        auto it = plans_.find(key);
        if (it != plans_.end())
            return it->second.get();
        int dims[2] = {static_cast<int>(n0), static_cast<int>(n1)};
        const int dist = rank == 1 ? dims[0] : dims[0] * dims[1];
        std::vector<Complex> scratch(static_cast<std::size_t>(dist) * howmany);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan p = fftw_plan_many_dft(rank, dims, static_cast<int>(howmany), buf, nullptr, 1, dist, buf,
                                         nullptr, 1, dist, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p)
            throw NumericalError("fft: plan creation failed");
        plans_.emplace(key, PlanHandle(p));
        return p;
    }

    fftw_plan real_plan(std::size_t n, bool forward) {
        std::lock_guard<std::mutex> lock(mutex_);
        const PlanKey key{1, n, 0, 1, forward ? FFTW_FORWARD : FFTW_BACKWARD, 1};
        auto it = plans_.find(key);
        if (it != plans_.end())
            return it->second.get();
        std::vector<double> r(n);
        std::vector<Complex> c(n / 2 + 1);
        auto* cb = reinterpret_cast<fftw_complex*>(c.data());
        const int ni = static_cast<int>(n);
        fftw_plan p = forward ? fftw_plan_dft_r2c_1d(ni, r.data(), cb, FFTW_ESTIMATE | FFTW_UNALIGNED)
                              : fftw_plan_dft_c2r_1d(ni, cb, r.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p)
            throw NumericalError("fft: plan creation failed");
        plans_.emplace(key, PlanHandle(p));
        return p;
    }

private:
    std::mutex mutex_;
    std::map<PlanKey, PlanHandle> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

int sign_of(Direction dir) { return dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD; }

void scale(Complex* data, std::size_t count, double factor) {
    for (std::size_t i = 0; i < count; ++i)
        data[i] *= factor;
}

} // namespace

void fft_inplace(std::span<Complex> data, Direction dir) {
    if (data.empty())
        return;
    fftw_plan p = cache().complex_plan(1, data.size(), 0, 1, sign_of(dir));
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(p, buf, buf);
    scale(data.data(), data.size(), 1.0 / std::sqrt(static_cast<double>(data.size())));
}

void fft_rows_inplace(ComplexArray2D& data, Direction dir) {
    if (data.empty())
        return;
    fftw_plan p = cache().complex_plan(1, data.cols(), 0, data.rows(), sign_of(dir));
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(p, buf, buf);
    scale(data.data(), data.size(), 1.0 / std::sqrt(static_cast<double>(data.cols())));
}

void fft2_inplace(ComplexArray2D& data, Direction dir) {
    if (data.empty())
        return;
    fftw_plan p = cache().complex_plan(2, data.rows(), data.cols(), 1, sign_of(dir));
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(p, buf, buf);
    scale(data.data(), data.size(), 1.0 / std::sqrt(static_cast<double>(data.size())));
}

std::vector<Complex> fft(std::span<const double> signal) {
    std::vector<Complex> out(signal.begin(), signal.end());
    fft_inplace(out, Direction::Forward);
    return out;
}

std::vector<double> ifft_real(std::vector<Complex> spectrum) {
    fft_inplace(spectrum, Direction::Inverse);
    std::vector<double> out(spectrum.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = spectrum[i].real();
    return out;
}

std::vector<Complex> rfft(std::span<const double> signal) {
    const std::size_t n = signal.size();
    if (n == 0)
        return {};
    std::vector<double> in(signal.begin(), signal.end());
    std::vector<Complex> out(n / 2 + 1);
    fftw_execute_dft_r2c(cache().real_plan(n, true), in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    scale(out.data(), out.size(), 1.0 / std::sqrt(static_cast<double>(n)));
    return out;
}

std::vector<double> irfft(std::span<const Complex> half, std::size_t n) {
    if (half.size() != n / 2 + 1)
        throw InputError("irfft: half spectrum length must be n/2+1");
    std::vector<Complex> in(half.begin(), half.end());
    std::vector<double> out(n);
    fftw_execute_dft_c2r(cache().real_plan(n, false), reinterpret_cast<fftw_complex*>(in.data()), out.data());
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& v : out)
        v *= s;
    return out;
}

ComplexArray2D to_complex(const Array2D& a) {
    ComplexArray2D out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i)
        out.values()[i] = a.values()[i];
    return out;
}

Array2D real_part(const ComplexArray2D& a) {
    Array2D out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i)
        out.values()[i] = a.values()[i].real();
    return out;
}

ComplexArray2D fft2(const Array2D& a) {
    ComplexArray2D out = to_complex(a);
    fft2_inplace(out, Direction::Forward);
    return out;
}

Array2D ifft2_real(ComplexArray2D spectrum) {
    fft2_inplace(spectrum, Direction::Inverse);
    return real_part(spectrum);
}

} // namespace phasereg
