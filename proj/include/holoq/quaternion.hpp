#pragma once

#include <cmath>
#include <complex>
#include <optional>

#include "holoq/errors.hpp"

namespace holoq {

using Complex = std::complex<double>;

/// Quaternion p = x + y*i + z*j + u*k over doubles.
/// Immutable value type; all operations are pure.
struct Quaternion {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double u = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double x_, double y_, double z_, double u_)
        : x(x_), y(y_), z(z_), u(u_) {}

    static constexpr Quaternion real(double r) { return {r, 0.0, 0.0, 0.0}; }
    static constexpr Quaternion unit_i() { return {0.0, 1.0, 0.0, 0.0}; }
    static constexpr Quaternion unit_j() { return {0.0, 0.0, 1.0, 0.0}; }
    static constexpr Quaternion unit_k() { return {0.0, 0.0, 0.0, 1.0}; }

    constexpr bool operator==(const Quaternion&) const = default;

    constexpr Quaternion operator+(const Quaternion& q) const {
        return {x + q.x, y + q.y, z + q.z, u + q.u};
    }
    constexpr Quaternion operator-(const Quaternion& q) const {
        return {x - q.x, y - q.y, z - q.z, u - q.u};
    }
    constexpr Quaternion operator-() const { return {-x, -y, -z, -u}; }

    constexpr Quaternion operator*(double s) const { return {x * s, y * s, z * s, u * s}; }
    constexpr Quaternion operator/(double s) const { return {x / s, y / s, z / s, u / s}; }

    friend constexpr Quaternion operator*(double s, const Quaternion& q) { return q * s; }
};

/// Hamilton product; i*j = k conventions.
constexpr Quaternion hamilton_mul(const Quaternion& p, const Quaternion& q) {
    return {p.x * q.x - p.y * q.y - p.z * q.z - p.u * q.u,
            p.x * q.y + p.y * q.x + p.z * q.u - p.u * q.z,
            p.x * q.z - p.y * q.u + p.z * q.x + p.u * q.y,
            p.x * q.u + p.y * q.z - p.z * q.y + p.u * q.x};
}

constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
    return hamilton_mul(p, q);
}

constexpr Quaternion conj(const Quaternion& p) { return {p.x, -p.y, -p.z, -p.u}; }

constexpr double norm_sq(const Quaternion& p) {
    return p.x * p.x + p.y * p.y + p.z * p.z + p.u * p.u;
}

inline double norm(const Quaternion& p) { return std::sqrt(norm_sq(p)); }

/// Magnitude of the imaginary part, v = sqrt(y^2 + z^2 + u^2).
inline double vec_norm(const Quaternion& p) {
    return std::sqrt(p.y * p.y + p.z * p.z + p.u * p.u);
}

inline Quaternion inverse(const Quaternion& p) {
    const double n2 = norm_sq(p);
    if (n2 == 0.0) throw DomainError("inverse of zero quaternion");
    return conj(p) / n2;
}

/// Cayley-Dickson pair p = a + b*j with a = x + y*i, b = z + u*i.
/// Conversions are pure re-labelings of the four components.
struct DoublingForm {
    Complex a{};
    Complex b{};

    constexpr bool operator==(const DoublingForm&) const = default;
};

constexpr DoublingForm to_doubling(const Quaternion& p) {
    return {Complex(p.x, p.y), Complex(p.z, p.u)};
}

constexpr Quaternion from_doubling(const DoublingForm& f) {
    return {f.a.real(), f.a.imag(), f.b.real(), f.b.imag()};
}

constexpr Quaternion from_doubling(const Complex& a, const Complex& b) {
    return {a.real(), a.imag(), b.real(), b.imag()};
}

/// Conjugate in doubling coordinates: conj(a + b*j) = conj(a) - b*j.
inline DoublingForm conj(const DoublingForm& f) { return {std::conj(f.a), -f.b}; }

/// Cayley-Dickson product: Re = f1*g1 - f2*conj(g2), Im = f2*conj(g1) + f1*g2.
/// Agrees with hamilton_mul; kept as an independent second route.
inline DoublingForm doubling_mul(const DoublingForm& f, const DoublingForm& g) {
    return {f.a * g.a - f.b * std::conj(g.b), f.b * std::conj(g.a) + f.a * g.b};
}

/// p = x + v*r with r a pure unit imaginary quaternion (r^2 = -1).
/// axis is unset on the real axis (v = 0), where r has no limit.
struct PolarForm {
    double x = 0.0;
    double v = 0.0;
    std::optional<Quaternion> axis{};
    double theta = 0.0;  // angle in [0, pi] with cos(theta) = x/|p|; 0 when p = 0
};

inline PolarForm to_polar(const Quaternion& p) {
    PolarForm f;
    f.x = p.x;
    f.v = vec_norm(p);
    if (f.v > 0.0) {
        f.axis = Quaternion{0.0, p.y / f.v, p.z / f.v, p.u / f.v};
        f.theta = std::atan2(f.v, p.x);  // == arccos(x/|p|) on [0, pi]
    } else {
        f.theta = p.x < 0.0 ? std::atan2(0.0, p.x) : 0.0;
    }
    return f;
}

inline Quaternion from_polar(const PolarForm& f) {
    if (!f.axis) return Quaternion::real(f.x);
    const Quaternion& r = *f.axis;
    return {f.x, f.v * r.y, f.v * r.z, f.v * r.u};
}

}  // namespace holoq
