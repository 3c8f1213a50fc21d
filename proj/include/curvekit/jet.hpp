#pragma once

#include <array>
#include <span>

#include "curvekit/errors.hpp"

namespace curvekit {

inline constexpr int kMaxJetDegree = 16;
inline constexpr int kDefaultJetDegree = 12;

// Truncated Taylor series of a scalar function at a basepoint t0.
// Coefficient j stores f^(j)(t0)/j!, so magnitudes stay balanced at high order.
// Binary operations require equal degree and equal basepoint; nothing truncates
// silently (use truncated() where a consumer needs a shorter jet).
class Jet {
public:
    Jet() = default;

    Jet(double basepoint, std::span<const double> coeffs) : t0_(basepoint) {
        if (coeffs.empty() || coeffs.size() > static_cast<std::size_t>(kMaxJetDegree) + 1)
            throw DegreeMismatch("jet coefficient count out of range");
        deg_ = static_cast<int>(coeffs.size()) - 1;
        for (int j = 0; j <= deg_; ++j) c_[j] = coeffs[j];
    }

    static Jet constant(double value, int degree, double basepoint = 0.0);
    static Jet variable(double basepoint, int degree);

    int degree() const { return deg_; }
    double basepoint() const { return t0_; }

    double operator[](int j) const { return c_[j]; }
    double& operator[](int j) { return c_[j]; }

    double value() const { return c_[0]; }
    // f^(order)(t0) = c_order * order!
    double derivative(int order) const;

    // Polynomial evaluation of the truncated series at offset h from the basepoint.
    double eval(double h) const;

    Jet truncated(int degree) const;
    // Zero-pad to a higher degree.
    Jet extended(int degree) const;
    // d/dt; degree drops by one.
    Jet derivative_jet() const;
    // Antiderivative with zero constant term; degree grows by one (capped at kMaxJetDegree).
    Jet antiderivative() const;

    // Largest |c_j|; the magnitude scale used by relative thresholds.
    double coeff_scale() const;

    Jet operator-() const;
    Jet operator+(const Jet& o) const;
    Jet operator-(const Jet& o) const;
    Jet operator*(const Jet& o) const;
    Jet operator/(const Jet& o) const;

    Jet operator+(double k) const;
    Jet operator-(double k) const;
    Jet operator*(double k) const;
    Jet operator/(double k) const;

private:
    void check_compatible(const Jet& o) const;

    int deg_ = 0;
    double t0_ = 0.0;
    std::array<double, kMaxJetDegree + 1> c_{};
};

inline Jet operator+(double k, const Jet& j) { return j + k; }
inline Jet operator-(double k, const Jet& j) { return (-j) + k; }
inline Jet operator*(double k, const Jet& j) { return j * k; }

Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet exp(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow_int(const Jet& a, int n);

// Series of outer∘(u0 + inner); inner must have (numerically) zero constant term.
Jet compose(const Jet& outer, const Jet& inner);

// Inverse series of a jet s with s.c0 == 0 and s.c1 != 0 (same degree, basepoint 0 offset).
Jet invert_series(const Jet& s);

}  // namespace curvekit
