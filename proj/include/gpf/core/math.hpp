// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace gpf {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInvPi = 1.0 / kPi;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
    friend constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

using Point3 = Vec3;

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
constexpr Vec3 hadamard(const Vec3& a, const Vec3& b) { return {a.x * b.x, a.y * b.y, a.z * b.z}; }
constexpr double length_squared(const Vec3& v) { return dot(v, v); }
inline double length(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double distance(const Point3& a, const Point3& b) { return length(a - b); }
inline double distance_squared(const Point3& a, const Point3& b) { return length_squared(a - b); }
inline bool is_finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}
inline Vec3 min(const Vec3& a, const Vec3& b) {
    return {std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)};
}
inline Vec3 max(const Vec3& a, const Vec3& b) {
    return {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)};
}

/// Direction with norm 1 (to within 1e-9). Construction normalizes; a zero or
/// non-finite input throws std::invalid_argument.
class UnitVec3 {
public:
    UnitVec3() = default;
    explicit UnitVec3(const Vec3& v);

    /// Trusts the caller that `v` is already normalized.
    static UnitVec3 unchecked(const Vec3& v) {
        UnitVec3 u;
        u.v_ = v;
        return u;
    }

    const Vec3& vec() const { return v_; }
    operator const Vec3&() const { return v_; }
    double x() const { return v_.x; }
    double y() const { return v_.y; }
    double z() const { return v_.z; }
    UnitVec3 operator-() const { return unchecked(-v_); }

private:
    Vec3 v_{0.0, 0.0, 1.0};
};

inline Vec3 normalize(const Vec3& v) { return v / length(v); }

/// Mirror `v` about normal `n`; both point away from the surface.
inline Vec3 reflect(const Vec3& v, const Vec3& n) { return 2.0 * dot(v, n) * n - v; }

/// Orthonormal basis (t, b, n) around a unit normal (Duff et al. 2017).
void coordinate_system(const Vec3& n, Vec3& t, Vec3& b);

struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};

    static constexpr Mat3 identity() {
        Mat3 r;
        r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
        return r;
    }
    constexpr double operator()(int r, int c) const { return m[r][c]; }
    constexpr double& operator()(int r, int c) { return m[r][c]; }

    Vec3 operator*(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
    /// Rᵀ v without forming the transpose.
    Vec3 transpose_mul(const Vec3& v) const {
        return {m[0][0] * v.x + m[1][0] * v.y + m[2][0] * v.z,
                m[0][1] * v.x + m[1][1] * v.y + m[2][1] * v.z,
                m[0][2] * v.x + m[1][2] * v.y + m[2][2] * v.z};
    }
    Mat3 operator*(const Mat3& o) const;
    Mat3 transposed() const;
    double determinant() const;
};

/// Quaternion (w, x, y, z), w first. Arithmetic container; unit-ness is the
/// job of UnitQuaternion.
struct Quaternion {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
    Quaternion operator-() const { return {-w, -x, -y, -z}; }
    friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

class UnitQuaternion {
public:
    UnitQuaternion() = default;
    /// Normalizes; throws std::invalid_argument on a zero or non-finite input.
    explicit UnitQuaternion(const Quaternion& q);

    const Quaternion& value() const { return q_; }
    double w() const { return q_.w; }
    double x() const { return q_.x; }
    double y() const { return q_.y; }
    double z() const { return q_.z; }

private:
    Quaternion q_;
};

/// Rotation matrix of q/|q|. Quadratic in the components, so q and -q give
/// bit-identical matrices.
Mat3 quaternion_to_matrix(const Quaternion& q);
inline Mat3 quaternion_to_matrix(const UnitQuaternion& q) { return quaternion_to_matrix(q.value()); }

}  // namespace gpf
