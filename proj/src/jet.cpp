#include "curvekit/jet.hpp"

#include <cmath>

namespace curvekit {

Jet Jet::constant(double value, int degree, double basepoint) {
    if (degree < 0 || degree > kMaxJetDegree) throw DegreeMismatch("jet degree out of range");
    Jet j;
    j.deg_ = degree;
    j.t0_ = basepoint;
    j.c_[0] = value;
    return j;
}

Jet Jet::variable(double basepoint, int degree) {
    Jet j = constant(basepoint, degree, basepoint);
    if (degree >= 1) j.c_[1] = 1.0;
    return j;
}

double Jet::derivative(int order) const {
    if (order < 0 || order > deg_) throw DegreeMismatch("derivative order exceeds jet degree");
    double f = 1.0;
    for (int i = 2; i <= order; ++i) f *= i;
    return c_[order] * f;
}

double Jet::eval(double h) const {
    double acc = c_[deg_];
    for (int j = deg_ - 1; j >= 0; --j) acc = acc * h + c_[j];
    return acc;
}

Jet Jet::truncated(int degree) const {
    if (degree < 0 || degree > deg_) throw DegreeMismatch("truncation degree out of range");
    Jet j;
    j.deg_ = degree;
    j.t0_ = t0_;
    for (int i = 0; i <= degree; ++i) j.c_[i] = c_[i];
    return j;
}

Jet Jet::extended(int degree) const {
    if (degree < deg_ || degree > kMaxJetDegree) throw DegreeMismatch("extension degree out of range");
    Jet j;
    j.deg_ = degree;
    j.t0_ = t0_;
    for (int i = 0; i <= deg_; ++i) j.c_[i] = c_[i];
    return j;
}

Jet Jet::derivative_jet() const {
    if (deg_ < 1) throw DegreeMismatch("cannot differentiate a degree-0 jet");
    Jet j;
    j.deg_ = deg_ - 1;
    j.t0_ = t0_;
    for (int i = 0; i < deg_; ++i) j.c_[i] = (i + 1) * c_[i + 1];
    return j;
}

Jet Jet::antiderivative() const {
    if (deg_ + 1 > kMaxJetDegree) throw DegreeMismatch("antiderivative exceeds max jet degree");
    Jet j;
    j.deg_ = deg_ + 1;
    j.t0_ = t0_;
    j.c_[0] = 0.0;
    for (int i = 0; i <= deg_; ++i) j.c_[i + 1] = c_[i] / (i + 1);
    return j;
}

double Jet::coeff_scale() const {
    double m = 0.0;
    for (int i = 0; i <= deg_; ++i) m = std::max(m, std::abs(c_[i]));
    return m;
}

void Jet::check_compatible(const Jet& o) const {
    if (deg_ != o.deg_) throw DegreeMismatch("jet degree mismatch");
    if (t0_ != o.t0_) throw DegreeMismatch("jet basepoint mismatch");
}

Jet Jet::operator-() const {
    Jet j = *this;
    for (int i = 0; i <= deg_; ++i) j.c_[i] = -j.c_[i];
    return j;
}

Jet Jet::operator+(const Jet& o) const {
    check_compatible(o);
    Jet j = *this;
    for (int i = 0; i <= deg_; ++i) j.c_[i] += o.c_[i];
    return j;
}

Jet Jet::operator-(const Jet& o) const {
    check_compatible(o);
    Jet j = *this;
    for (int i = 0; i <= deg_; ++i) j.c_[i] -= o.c_[i];
    return j;
}

Jet Jet::operator*(const Jet& o) const {
    check_compatible(o);
    Jet j;
    j.deg_ = deg_;
    j.t0_ = t0_;
    for (int i = 0; i <= deg_; ++i) {
        const double a = c_[i];
        if (a == 0.0) continue;
        for (int k = 0; i + k <= deg_; ++k) j.c_[i + k] += a * o.c_[k];
    }
    return j;
}

Jet Jet::operator/(const Jet& o) const {
    check_compatible(o);
    // the divisor's low-order magnitude is the meaningful yardstick: high-order
    // coefficients grow legitimately when the local convergence radius is small
    double low = 0.0;
    for (int j = 1; j <= std::min(o.deg_, 2); ++j) low = std::max(low, std::abs(o.c_[j]));
    if (std::abs(o.c_[0]) < 1e-12 * low || o.c_[0] == 0.0)
        throw DivisionByZeroSeries("series division by (near-)zero constant term");
    Jet q;
    q.deg_ = deg_;
    q.t0_ = t0_;
    for (int n = 0; n <= deg_; ++n) {
        double s = c_[n];
        for (int j = 1; j <= n; ++j) s -= o.c_[j] * q.c_[n - j];
        q.c_[n] = s / o.c_[0];
    }
    return q;
}

Jet Jet::operator+(double k) const {
    Jet j = *this;
    j.c_[0] += k;
    return j;
}

Jet Jet::operator-(double k) const { return *this + (-k); }

Jet Jet::operator*(double k) const {
    Jet j = *this;
    for (int i = 0; i <= deg_; ++i) j.c_[i] *= k;
    return j;
}

Jet Jet::operator/(double k) const {
    if (k == 0.0) throw DivisionByZeroSeries("division by zero scalar");
    return *this * (1.0 / k);
}

// sin and cos satisfy the coupled recurrence
//   n s_n = sum_{j=1..n} j a_j c_{n-j},   n c_n = -sum_{j=1..n} j a_j s_{n-j}
static void sincos_jets(const Jet& a, Jet& s, Jet& c) {
    const int K = a.degree();
    s = Jet::constant(std::sin(a[0]), K, a.basepoint());
    c = Jet::constant(std::cos(a[0]), K, a.basepoint());
    for (int n = 1; n <= K; ++n) {
        double accs = 0.0, accc = 0.0;
        for (int j = 1; j <= n; ++j) {
            accs += j * a[j] * c[n - j];
            accc += j * a[j] * s[n - j];
        }
        s[n] = accs / n;
        c[n] = -accc / n;
    }
}

Jet sin(const Jet& a) {
    Jet s, c;
    sincos_jets(a, s, c);
    return s;
}

Jet cos(const Jet& a) {
    Jet s, c;
    sincos_jets(a, s, c);
    return c;
}

Jet exp(const Jet& a) {
    const int K = a.degree();
    Jet e = Jet::constant(std::exp(a[0]), K, a.basepoint());
    for (int n = 1; n <= K; ++n) {
        double acc = 0.0;
        for (int j = 1; j <= n; ++j) acc += j * a[j] * e[n - j];
        e[n] = acc / n;
    }
    return e;
}

Jet sqrt(const Jet& a) {
    if (!(a[0] > 0.0)) throw DomainError("sqrt of non-positive constant term");
    const int K = a.degree();
    Jet s = Jet::constant(std::sqrt(a[0]), K, a.basepoint());
    for (int n = 1; n <= K; ++n) {
        double acc = a[n];
        for (int j = 1; j < n; ++j) acc -= s[j] * s[n - j];
        s[n] = acc / (2.0 * s[0]);
    }
    return s;
}

Jet pow_int(const Jet& a, int n) {
    const int K = a.degree();
    if (n == 0) return Jet::constant(1.0, K, a.basepoint());
    bool invert = n < 0;
    unsigned m = invert ? static_cast<unsigned>(-(long long)n) : static_cast<unsigned>(n);
    if (invert && a[0] == 0.0)
        throw DomainError("negative power of series with zero constant term");
    Jet base = a;
    Jet acc = Jet::constant(1.0, K, a.basepoint());
    while (m > 0) {
        if (m & 1u) acc = acc * base;
        base = base * base;
        m >>= 1u;
    }
    if (invert) return Jet::constant(1.0, K, a.basepoint()) / acc;
    return acc;
}

Jet compose(const Jet& outer, const Jet& inner) {
    if (outer.degree() != inner.degree()) throw DegreeMismatch("compose degree mismatch");
    const double scale = std::max(1.0, inner.coeff_scale());
    if (std::abs(inner[0]) > 1e-12 * scale)
        throw CompositionBasepointError("inner series must have zero constant term");
    const int K = outer.degree();
    // Horner over the inner jet; inner's (tiny) constant term is dropped exactly.
    Jet x = inner;
    x[0] = 0.0;
    Jet acc = Jet::constant(outer[K], K, inner.basepoint());
    for (int j = K - 1; j >= 0; --j) acc = acc * x + outer[j];
    return acc;
}

Jet invert_series(const Jet& s) {
    const int K = s.degree();
    if (K < 1 || s[1] == 0.0) throw DomainError("series inversion needs a nonzero linear term");
    const double scale = std::max(1.0, s.coeff_scale());
    if (std::abs(s[0]) > 1e-12 * scale)
        throw CompositionBasepointError("series inversion needs zero constant term");
    // Newton iteration on jets: t <- t - (s(t) - id)/s'(t).
    Jet id = Jet::variable(s.basepoint(), K);
    id[0] = 0.0;
    Jet t = id / s[1];
    Jet sp = s.derivative_jet().extended(K);
    for (int it = 0; it < 8; ++it) {
        Jet st = compose(s, t);
        Jet spt = compose(sp, t);
        t = t - (st - id) / spt;
        t[0] = 0.0;
    }
    return t;
}

}  // namespace curvekit
