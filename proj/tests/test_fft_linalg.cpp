#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "parc/fft.hpp"
#include "parc/linalg.hpp"

using namespace parc;

namespace {

struct Lcg {
    std::uint64_t s;
    explicit Lcg(std::uint64_t seed) : s(seed) {}
    double uniform(double lo, double hi) {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return lo + (hi - lo) * (static_cast<double>(s >> 11) / 9007199254740992.0);
    }
};

// Brute-force O(N^2) DFT, the independent oracle for the fast path.
std::vector<double> naive_dft_magnitudes(const std::vector<cplx>& x, int n_fft) {
    std::vector<double> mags(static_cast<std::size_t>(n_fft));
    const auto n = static_cast<double>(x.size());
    for (int j = 0; j < n_fft; ++j) {
        // accumulate in extended precision so the oracle's own rounding does
        // not eat the comparison budget
        long double re = 0.0L, im = 0.0L;
        for (std::size_t m = 0; m < x.size(); ++m) {
            // reduce j*m mod N in integer arithmetic; large raw angles lose
            // precision to argument reduction
            const auto idx = (static_cast<std::size_t>(j) * m) % x.size();
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(idx) / n;
            const double c = std::cos(ang), s = std::sin(ang);
            re += static_cast<long double>(x[m].real()) * c - x[m].imag() * s;
            im += static_cast<long double>(x[m].real()) * s + x[m].imag() * c;
        }
        mags[static_cast<std::size_t>(j)] =
            static_cast<double>(std::sqrt(re * re + im * im));
    }
    return mags;
}

}  // namespace

TEST_CASE("dft magnitudes: constant sequence has a DC-only spectrum") {
    const cplx c{0.7, -0.3};
    std::vector<cplx> x(8, c);
    const auto mags = dft_magnitudes(x, 8);
    CHECK(mags[0] == doctest::Approx(8.0 * std::abs(c)).epsilon(1e-14));
    for (std::size_t j = 1; j < 8; ++j) CHECK(mags[j] < 1e-14);
}

TEST_CASE("dft magnitudes: unit impulse is flat") {
    std::vector<cplx> x(16, cplx{0.0, 0.0});
    x[0] = {1.0, 0.0};
    const auto mags = dft_magnitudes(x, 16);
    for (double m : mags) CHECK(m == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("dft magnitudes match the brute-force oracle") {
    Lcg rng(61);
    for (std::size_t n : {16u, 128u, 512u}) {
        std::vector<cplx> x(n);
        for (auto& v : x) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const auto fast = dft_magnitudes(x, static_cast<int>(n));
        const auto slow = naive_dft_magnitudes(x, static_cast<int>(n));
        for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(fast[j] - slow[j]) < 1e-12);
    }
}

TEST_CASE("dft handles non power-of-two lengths") {
    Lcg rng(67);
    std::vector<cplx> x(12);
    for (auto& v : x) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const auto fast = dft_magnitudes(x, 12);
    const auto slow = naive_dft_magnitudes(x, 12);
    for (std::size_t j = 0; j < 12; ++j) CHECK(std::abs(fast[j] - slow[j]) < 1e-12);
}

TEST_CASE("dft prefix: n_fft bins are the first bins of the full transform") {
    Lcg rng(71);
    std::vector<cplx> x(64);
    for (auto& v : x) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const auto full = dft_magnitudes(x, 64);
    const auto prefix = dft_magnitudes(x, 9);
    for (std::size_t j = 0; j < 9; ++j) CHECK(prefix[j] == full[j]);
    CHECK_THROWS_AS(dft_magnitudes(x, 65), InvalidStateError);
}

TEST_CASE("gram: parallel kernel is bit-identical to the serial reference") {
    Lcg rng(73);
    Matrix x(53, 37);
    for (double& v : x.data()) v = rng.uniform(-2, 2);
    const Matrix a1 = gram_regularized_serial(x, 1e-3);
    const Matrix a2 = gram_regularized(x, 1e-3, 1);
    const Matrix a4 = gram_regularized(x, 1e-3, 4);
    REQUIRE(a1.data().size() == a2.data().size());
    for (std::size_t i = 0; i < a1.data().size(); ++i) {
        CHECK(a1.data()[i] == a2.data()[i]);
        CHECK(a1.data()[i] == a4.data()[i]);
    }
}

TEST_CASE("gram matches an elementwise oracle and is symmetric") {
    Lcg rng(79);
    Matrix x(12, 7);
    for (double& v : x.data()) v = rng.uniform(-1, 1);
    const double lambda = 0.37;
    const Matrix a = gram_regularized(x, lambda);
    for (std::size_t i = 0; i < 7; ++i) {
        for (std::size_t j = 0; j < 7; ++j) {
            double expect = i == j ? lambda : 0.0;
            for (std::size_t r = 0; r < 12; ++r) expect += x(r, i) * x(r, j);
            CHECK(a(i, j) == doctest::Approx(expect).epsilon(1e-12));
            CHECK(a(i, j) == a(j, i));
        }
    }
}

TEST_CASE("cholesky solves SPD systems") {
    SUBCASE("known 2x2") {
        Matrix a(2, 2);
        a(0, 0) = 4.0;
        a(0, 1) = a(1, 0) = 2.0;
        a(1, 1) = 3.0;
        const double b[] = {2.0, 5.0};
        const auto x = spd_solve(a, b);
        // solved by hand: x = (-1/2, 2)
        CHECK(x[0] == doctest::Approx(-0.5).epsilon(1e-14));
        CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-14));
    }
    SUBCASE("random SPD, residual check") {
        Lcg rng(83);
        Matrix x(40, 15);
        for (double& v : x.data()) v = rng.uniform(-1, 1);
        const Matrix a = gram_regularized(x, 0.5);
        std::vector<double> b(15);
        for (double& v : b) v = rng.uniform(-1, 1);
        const auto sol = spd_solve(a, b);
        // residual ||A sol - b||
        for (std::size_t i = 0; i < 15; ++i) {
            double r = -b[i];
            for (std::size_t j = 0; j < 15; ++j) r += a(i, j) * sol[j];
            CHECK(std::abs(r) < 1e-10);
        }
    }
    SUBCASE("parallel factorization matches serial bitwise") {
        Lcg rng(89);
        Matrix x(30, 9);
        for (double& v : x.data()) v = rng.uniform(-1, 1);
        Matrix a1 = gram_regularized(x, 0.1);
        Matrix a2 = a1;
        cholesky_factor(a1, 1);
        cholesky_factor(a2, 4);
        for (std::size_t i = 0; i < a1.data().size(); ++i) CHECK(a1.data()[i] == a2.data()[i]);
    }
    SUBCASE("indefinite matrix is rejected") {
        Matrix a(2, 2);
        a(0, 0) = 1.0;
        a(0, 1) = a(1, 0) = 2.0;
        a(1, 1) = 1.0;
        CHECK_THROWS_AS(cholesky_factor(a), DegenerateError);
    }
}

TEST_CASE("matvec shapes") {
    Matrix x(2, 3);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) x(i, j) = static_cast<double>(i * 3 + j + 1);
    const double w[] = {1.0, 0.0, -1.0};
    const auto y = matvec(x, w);
    CHECK(y == std::vector<double>{-2.0, -2.0});
    const double v[] = {1.0, 1.0};
    const auto yt = matvec_transposed(x, v);
    CHECK(yt == std::vector<double>{5.0, 7.0, 9.0});
    CHECK_THROWS_AS(matvec(x, std::span<const double>(v, 2)), InvalidStateError);
}
