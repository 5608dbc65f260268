#pragma once
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

namespace testing_support {

inline std::uint64_t seed() {
    if (const char* s = std::getenv("PAIRING_CALC_SEED")) return std::stoull(s);
    return 20240611;
}

inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(seed() ^ (salt * 0x9e3779b97f4a7c15ULL)); }

// Composite 8-point Gauss-Legendre on n equal panels. Independent of the core's quadrature.
inline double gauss_legendre(const std::function<double(double)>& f, double a, double b, int n = 64) {
    static const double x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
    static const double w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    double h = (b - a) / n, s = 0;
    for (int i = 0; i < n; ++i) {
        double m = a + (i + 0.5) * h, r = 0.5 * h;
        for (int k = 0; k < 4; ++k) s += w[k] * (f(m - r * x[k]) + f(m + r * x[k]));
    }
    return s * 0.5 * h;
}

}  // namespace testing_support
