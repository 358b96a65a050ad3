#include "fft.hpp"

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "couette/error.hpp"

namespace couette::detail {

namespace {

struct Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

const Plans& plans_for(int n1, int rows) {
    static std::map<std::pair<int, int>, Plans> cache;
    std::lock_guard<std::mutex> lock(plan_mutex());
    auto key = std::make_pair(n1, rows);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const int modes = n1 / 2 + 1;
    std::vector<double> real(static_cast<size_t>(n1) * rows);
    std::vector<fftw_complex> cplx(static_cast<size_t>(modes) * rows);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    Plans p;
    // Line j: real samples at j + i*rows, complex modes at j + m*rows.
    p.forward = fftw_plan_many_dft_r2c(1, &n1, rows, real.data(), nullptr, rows, 1, cplx.data(),
                                       nullptr, rows, 1, flags);
    p.backward = fftw_plan_many_dft_c2r(1, &n1, rows, cplx.data(), nullptr, rows, 1, real.data(),
                                        nullptr, rows, 1, flags);
    if (!p.forward || !p.backward) throw Error("FFTW planning failed");
    return cache.emplace(key, p).first->second;
}

}  // namespace

void forward_x1(const Eigen::ArrayXXd& values, Spectrum& spectrum) {
    const int rows = static_cast<int>(values.rows());
    const int n1 = static_cast<int>(values.cols());
    spectrum.resize(rows, n1 / 2 + 1);
    const Plans& p = plans_for(n1, rows);
    // r2c does not modify its input, the const_cast only satisfies the C signature.
    fftw_execute_dft_r2c(p.forward, const_cast<double*>(values.data()),
                         reinterpret_cast<fftw_complex*>(spectrum.data()));
}

void inverse_x1(const Spectrum& spectrum, Eigen::ArrayXXd& values, int n1) {
    const int rows = static_cast<int>(spectrum.rows());
    values.resize(rows, n1);
    Spectrum scratch = spectrum;  // c2r overwrites its input
    const Plans& p = plans_for(n1, rows);
    fftw_execute_dft_c2r(p.backward, reinterpret_cast<fftw_complex*>(scratch.data()),
                         values.data());
    values /= static_cast<double>(n1);
}

}  // namespace couette::detail
