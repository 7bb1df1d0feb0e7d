// SPDX-License-Identifier: Apache-2.0
#include "gpf/io/metrics.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "gpf/core/error.hpp"

namespace gpf {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;

void check_same_size(const Image8& a, const Image8& b) {
    if (a.width != b.width || a.height != b.height) {
        throw ValidationError("image size mismatch: " + std::to_string(a.width) + "x" + std::to_string(a.height) +
                              " vs " + std::to_string(b.width) + "x" + std::to_string(b.height));
    }
}

std::array<double, kWindow> gaussian_window() {
    std::array<double, kWindow> w{};
    double sum = 0.0;
    for (int i = 0; i < kWindow; ++i) {
        const double d = i - kWindow / 2;
        w[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
        sum += w[i];
    }
    for (double& v : w) v /= sum;
    return w;
}

std::vector<double> luma(const Image8& img) {
    std::vector<double> y(static_cast<std::size_t>(img.width) * img.height);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = 0.299 * img.rgb[3 * i] + 0.587 * img.rgb[3 * i + 1] + 0.114 * img.rgb[3 * i + 2];
    }
    return y;
}

/// Separable 'valid' filtering: output is (w - 10) x (h - 10).
std::vector<double> filter_valid(const std::vector<double>& src, int w, int h) {
    static const auto win = gaussian_window();
    const int ow = w - kWindow + 1, oh = h - kWindow + 1;
    std::vector<double> rows(static_cast<std::size_t>(ow) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int k = 0; k < kWindow; ++k) s += win[k] * src[static_cast<std::size_t>(y) * w + x + k];
            rows[static_cast<std::size_t>(y) * ow + x] = s;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(ow) * oh);
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int k = 0; k < kWindow; ++k) s += win[k] * rows[static_cast<std::size_t>(y + k) * ow + x];
            out[static_cast<std::size_t>(y) * ow + x] = s;
        }
    }
    return out;
}

}  // namespace

double psnr(const Image8& a, const Image8& b) {
    check_same_size(a, b);
    if (a.rgb.empty()) throw ValidationError("psnr: empty images");
    double sse = 0.0;
    for (std::size_t i = 0; i < a.rgb.size(); ++i) {
        const double d = double(a.rgb[i]) - double(b.rgb[i]);
        sse += d * d;
    }
    if (sse == 0.0) return std::numeric_limits<double>::infinity();
    const double mse = sse / static_cast<double>(a.rgb.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const Image8& a, const Image8& b) {
    check_same_size(a, b);
    if (a.width < kWindow || a.height < kWindow) {
        throw ValidationError("ssim: images must be at least 11x11");
    }
    if (a.rgb == b.rgb) return 1.0;
    const int w = a.width, h = a.height;
    const std::vector<double> x = luma(a), y = luma(b);
    std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }
    const auto mx = filter_valid(x, w, h), my = filter_valid(y, w, h);
    const auto sxx = filter_valid(xx, w, h), syy = filter_valid(yy, w, h), sxy = filter_valid(xy, w, h);
    constexpr double c1 = (0.01 * 255) * (0.01 * 255);
    constexpr double c2 = (0.03 * 255) * (0.03 * 255);
    double total = 0.0;
    for (std::size_t i = 0; i < mx.size(); ++i) {
        const double vx = sxx[i] - mx[i] * mx[i];
        const double vy = syy[i] - my[i] * my[i];
        const double cov = sxy[i] - mx[i] * my[i];
        total += ((2.0 * mx[i] * my[i] + c1) * (2.0 * cov + c2)) /
                 ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
    }
    return total / static_cast<double>(mx.size());
}

double psnr(const RadianceImage& a, const RadianceImage& b, double exposure) {
    return psnr(tone_map(a, exposure), tone_map(b, exposure));
}

double ssim(const RadianceImage& a, const RadianceImage& b, double exposure) {
    return ssim(tone_map(a, exposure), tone_map(b, exposure));
}

nlohmann::json to_json(const MetricsRecord& m) {
    nlohmann::json j;
    if (std::isinf(m.psnr)) {
        j["psnr"] = m.psnr > 0 ? "inf" : "-inf";
    } else {
        j["psnr"] = m.psnr;
    }
    j["ssim"] = m.ssim;
    j["time_seconds"] = m.time_seconds;
    j["storage_bytes"] = m.storage_bytes;
    return j;
}

double metric_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        if (j == "inf") return std::numeric_limits<double>::infinity();
        if (j == "-inf") return -std::numeric_limits<double>::infinity();
        throw ParseError("metric: unexpected string " + j.dump());
    }
    if (!j.is_number()) throw ParseError("metric: expected a number");
    return j.get<double>();
}

}  // namespace gpf
