#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace h3bound {

/// Thrown when a point or intermediate value leaves the range representable
/// at double precision (e.g. ball coordinates past radius 1 - 1e-15, or
/// hyperboloid components past overflow).
class RangeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
    Vec3 normalized() const {
        double n = norm();
        if (n == 0) throw std::domain_error("cannot normalize zero vector");
        return *this / n;
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Minkowski 4-vector with signature (-,+,+,+); `t` is the time component.
struct Vec4 {
    double t = 0, x = 0, y = 0, z = 0;

    Vec4 operator+(const Vec4& o) const { return {t + o.t, x + o.x, y + o.y, z + o.z}; }
    Vec4 operator-(const Vec4& o) const { return {t - o.t, x - o.x, y - o.y, z - o.z}; }
    Vec4 operator*(double s) const { return {t * s, x * s, y * s, z * s}; }
    Vec4 operator-() const { return {-t, -x, -y, -z}; }

    Vec3 spatial() const { return {x, y, z}; }
};

inline Vec4 operator*(double s, const Vec4& v) { return v * s; }

/// Lorentz inner product <a,b> = -a.t*b.t + a.xyz . b.xyz.
inline double ldot(const Vec4& a, const Vec4& b) {
    return -a.t * b.t + a.x * b.x + a.y * b.y + a.z * b.z;
}

/// 4x4 Lorentz transformation (isometry of the hyperboloid model).
struct LorentzMat {
    std::array<std::array<double, 4>, 4> m{};

    static LorentzMat identity() {
        LorentzMat r;
        for (int i = 0; i < 4; ++i) r.m[i][i] = 1.0;
        return r;
    }

    /// Spatial rotation about a unit axis by `angle` (fixes the origin).
    static LorentzMat rotation(const Vec3& axis, double angle);

    /// Boost along +x of given rapidity (translation along the x-axis geodesic).
    static LorentzMat boost_x(double rapidity);

    /// Parabolic isometry fixing the ideal point (-1,0,0); acts as the
    /// translation by (v2,v3) on the horosphere through the origin, so it
    /// preserves the canonical horoball.
    static LorentzMat parabolic_xi(double v2, double v3);

    Vec4 apply(const Vec4& v) const {
        Vec4 r;
        r.t = m[0][0] * v.t + m[0][1] * v.x + m[0][2] * v.y + m[0][3] * v.z;
        r.x = m[1][0] * v.t + m[1][1] * v.x + m[1][2] * v.y + m[1][3] * v.z;
        r.y = m[2][0] * v.t + m[2][1] * v.x + m[2][2] * v.y + m[2][3] * v.z;
        r.z = m[3][0] * v.t + m[3][1] * v.x + m[3][2] * v.y + m[3][3] * v.z;
        return r;
    }

    LorentzMat compose(const LorentzMat& o) const {
        LorentzMat r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double s = 0;
                for (int k = 0; k < 4; ++k) s += m[i][k] * o.m[k][j];
                r.m[i][j] = s;
            }
        return r;
    }
};

} // namespace h3bound
