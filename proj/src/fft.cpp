#include "parc/fft.hpp"

#include <cmath>
#include <numbers>

namespace parc {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

void fft_radix2(std::vector<cplx>& data) {
    const std::size_t n = data.size();
    if (!is_pow2(n)) throw InvalidStateError("fft_radix2: size must be a power of two");
    if (n < 2) return;

    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    // One exact twiddle table for the whole transform: w_n^k from std::polar
    // rather than iterated multiplication, which drifts by O(len * eps).
    std::vector<cplx> twiddle(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
        twiddle[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) /
                                         static_cast<double>(n));

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx w = twiddle[k * stride];
                const cplx u = data[i + k];
                const cplx v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
            }
        }
    }
}

std::vector<cplx> dft(std::span<const cplx> samples) {
    const std::size_t n = samples.size();
    if (is_pow2(n)) {
        std::vector<cplx> bins(samples.begin(), samples.end());
        fft_radix2(bins);
        return bins;
    }
    // direct evaluation for non power-of-two lengths; indices reduced mod n
    // so the trig arguments stay small
    std::vector<cplx> table(n);
    for (std::size_t k = 0; k < n; ++k)
        table[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) /
                                       static_cast<double>(n));
    std::vector<cplx> bins(n);
    for (std::size_t j = 0; j < n; ++j) {
        cplx acc{0.0, 0.0};
        for (std::size_t m = 0; m < n; ++m) acc += samples[m] * table[(j * m) % n];
        bins[j] = acc;
    }
    return bins;
}

std::vector<double> dft_magnitudes(std::span<const cplx> samples, int n_fft) {
    if (n_fft < 0 || static_cast<std::size_t>(n_fft) > samples.size())
        throw InvalidStateError("dft_magnitudes: n_fft must be in [0, N]");
    const std::vector<cplx> bins = dft(samples);
    std::vector<double> mags(static_cast<std::size_t>(n_fft));
    for (int j = 0; j < n_fft; ++j) mags[static_cast<std::size_t>(j)] = std::abs(bins[static_cast<std::size_t>(j)]);
    return mags;
}

}  // namespace parc
