// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>

namespace gpf {

/// Linear RGB radiometric value: radiance, flux or throughput depending on use.
struct RgbSpectrum {
    double r = 0.0, g = 0.0, b = 0.0;

    constexpr RgbSpectrum() = default;
    constexpr RgbSpectrum(double r_, double g_, double b_) : r(r_), g(g_), b(b_) {}
    constexpr explicit RgbSpectrum(double v) : r(v), g(v), b(v) {}

    constexpr double operator[](int i) const { return i == 0 ? r : (i == 1 ? g : b); }
    constexpr double& operator[](int i) { return i == 0 ? r : (i == 1 ? g : b); }

    constexpr RgbSpectrum& operator+=(const RgbSpectrum& o) { r += o.r; g += o.g; b += o.b; return *this; }
    constexpr RgbSpectrum& operator-=(const RgbSpectrum& o) { r -= o.r; g -= o.g; b -= o.b; return *this; }
    constexpr RgbSpectrum& operator*=(const RgbSpectrum& o) { r *= o.r; g *= o.g; b *= o.b; return *this; }
    constexpr RgbSpectrum& operator*=(double s) { r *= s; g *= s; b *= s; return *this; }
    constexpr RgbSpectrum& operator/=(double s) { r /= s; g /= s; b /= s; return *this; }

    friend constexpr RgbSpectrum operator+(RgbSpectrum a, const RgbSpectrum& b) { return a += b; }
    friend constexpr RgbSpectrum operator-(RgbSpectrum a, const RgbSpectrum& b) { return a -= b; }
    friend constexpr RgbSpectrum operator*(RgbSpectrum a, const RgbSpectrum& b) { return a *= b; }
    friend constexpr RgbSpectrum operator*(RgbSpectrum a, double s) { return a *= s; }
    friend constexpr RgbSpectrum operator*(double s, RgbSpectrum a) { return a *= s; }
    friend constexpr RgbSpectrum operator/(RgbSpectrum a, double s) { return a /= s; }
    friend constexpr bool operator==(const RgbSpectrum&, const RgbSpectrum&) = default;

    constexpr bool is_black() const { return r == 0.0 && g == 0.0 && b == 0.0; }
    constexpr double max_component() const { return std::max(r, std::max(g, b)); }
    constexpr double average() const { return (r + g + b) / 3.0; }
    bool is_finite() const { return std::isfinite(r) && std::isfinite(g) && std::isfinite(b); }
    constexpr bool is_non_negative() const { return r >= 0.0 && g >= 0.0 && b >= 0.0; }
};

inline RgbSpectrum clamp_zero(const RgbSpectrum& s) {
    return {std::max(s.r, 0.0), std::max(s.g, 0.0), std::max(s.b, 0.0)};
}

}  // namespace gpf
