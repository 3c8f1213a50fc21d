#pragma once

#include <cmath>

#include "curvekit/jet.hpp"

namespace curvekit {

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double k) const { return {x * k, y * k}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    Vec2 normalized() const {
        double n = norm();
        return {x / n, y / n};
    }
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double k) const { return {x * k, y * k, z * k}; }
    Vec3 operator/(double k) const { return {x / k, y / k, z / k}; }
    double dot(Vec3 o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(Vec3 o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const {
        double n = norm();
        return {x / n, y / n, z / n};
    }
};

inline Vec3 operator*(double k, Vec3 v) { return v * k; }

// Row-major 3x3 matrix; columns(c0,c1,c2) builds the matrix with the given columns.
struct Mat3 {
    double m[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    static Mat3 identity() { return {}; }

    static Mat3 columns(Vec3 c0, Vec3 c1, Vec3 c2) {
        Mat3 r;
        r.m[0][0] = c0.x; r.m[0][1] = c1.x; r.m[0][2] = c2.x;
        r.m[1][0] = c0.y; r.m[1][1] = c1.y; r.m[1][2] = c2.y;
        r.m[2][0] = c0.z; r.m[2][1] = c1.z; r.m[2][2] = c2.z;
        return r;
    }

    static Mat3 rotation(Vec3 axis, double angle) {
        Vec3 u = axis.normalized();
        double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
        Mat3 r;
        r.m[0][0] = c + u.x * u.x * t;
        r.m[0][1] = u.x * u.y * t - u.z * s;
        r.m[0][2] = u.x * u.z * t + u.y * s;
        r.m[1][0] = u.y * u.x * t + u.z * s;
        r.m[1][1] = c + u.y * u.y * t;
        r.m[1][2] = u.y * u.z * t - u.x * s;
        r.m[2][0] = u.z * u.x * t - u.y * s;
        r.m[2][1] = u.z * u.y * t + u.x * s;
        r.m[2][2] = c + u.z * u.z * t;
        return r;
    }

    Vec3 apply(Vec3 v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }

    Mat3 transpose() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
        return r;
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += m[i][k] * o.m[k][j];
                r.m[i][j] = s;
            }
        return r;
    }
};

// A 3-vector of jets sharing degree and basepoint.
struct Jet3 {
    Jet x, y, z;

    int degree() const { return x.degree(); }
    double basepoint() const { return x.basepoint(); }

    Vec3 value() const { return {x.value(), y.value(), z.value()}; }

    Jet3 operator+(const Jet3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Jet3 operator-(const Jet3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Jet3 operator-() const { return {-x, -y, -z}; }

    Jet3 truncated(int degree) const {
        return {x.truncated(degree), y.truncated(degree), z.truncated(degree)};
    }
    Jet3 derivative_jet() const {
        return {x.derivative_jet(), y.derivative_jet(), z.derivative_jet()};
    }

    Jet dot(const Jet3& o) const { return x * o.x + y * o.y + z * o.z; }
    Jet3 cross(const Jet3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
};

inline Jet3 operator*(const Jet& s, const Jet3& v) { return {s * v.x, s * v.y, s * v.z}; }
inline Jet3 operator*(double k, const Jet3& v) { return {v.x * k, v.y * k, v.z * k}; }

}  // namespace curvekit
