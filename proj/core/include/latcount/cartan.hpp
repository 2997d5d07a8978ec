#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "latcount/int_mat.hpp"

// Real Cartan decomposition g = k1 a k2 with a in the closed positive
// chamber: closed form for SL2(R), Jacobi eigensolver on g^T g for SL3(R).
// Also the hyperbolic distance, sector/bisector membership with a regularity
// cutoff, and the perturbation probe for the effective Cartan decomposition.

namespace latcount {

struct NonUnimodular : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RegularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Mat2 {
    // row-major [[a, b], [c, d]]
    double a = 1, b = 0, c = 0, d = 1;

    static Mat2 rotation(double theta) {
        double co = std::cos(theta), si = std::sin(theta);
        return {co, -si, si, co};
    }
    // diag(e^{s/2}, e^{-s/2})
    static Mat2 chamber(double s) { return {std::exp(0.5 * s), 0, 0, std::exp(-0.5 * s)}; }
    static Mat2 from(const IntMat& m) {
        return {double(m.at(0, 0)), double(m.at(0, 1)), double(m.at(1, 0)), double(m.at(1, 1))};
    }

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    double det() const { return a * d - b * c; }
    double frobenius_sq() const { return a * a + b * b + c * c + d * d; }
    // valid for det = 1
    Mat2 inverse() const { return {d, -b, -c, a}; }
    double max_abs_diff(const Mat2& o) const {
        return std::max(std::max(std::fabs(a - o.a), std::fabs(b - o.b)),
                        std::max(std::fabs(c - o.c), std::fabs(d - o.d)));
    }
};

// exp of the traceless matrix [[x, y], [z, -x]] in closed form
Mat2 sl2_exp(double x, double y, double z);

// exp along direction (x, y, z), rescaled so that ||exp(X) - I||_F == target.
Mat2 sl2_perturbation(double x, double y, double z, double target);

using Mat3 = std::array<std::array<double, 3>, 3>;

struct CartanCoords {
    int n = 2;
    // n = 2: k1 = rotation(phi) with phi in [0, pi) after the M = {+-I}
    // normalization, k2 = rotation(psi) with psi in [0, 2*pi).
    double phi = 0;
    double psi = 0;
    // Descending logs of singular values, summing to 0.  For n = 2 this is
    // {s/2, -s/2} with a = diag(e^{s/2}, e^{-s/2}).
    std::array<double, 3> log_a{};
    Mat3 k1m{}, k2m{};  // n = 3 only

    double radial() const { return log_a[0] - log_a[static_cast<size_t>(n) - 1]; }
    // Distance of the a-component from the chamber walls; for SL2 this is s.
    double chamber_distance() const {
        double d = log_a[0] - log_a[1];
        if (n == 3) d = std::min(d, log_a[1] - log_a[2]);
        return d;
    }
};

// Half-open angular interval [lo, hi).
struct AngleInterval {
    double lo = 0, hi = 0;
    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x < hi; }
};

struct DomainSpec {
    enum class Kind { NormBall, HyperbolicBall, Sector, Bisector };

    Kind kind = Kind::HyperbolicBall;
    double radius = 0;  // T for NormBall, hyperbolic t otherwise
    AngleInterval arc1{0, kPi};    // k1 angles, fundamental range [0, pi)
    AngleInterval arc2{0, kTwoPi}; // k2 angles, fundamental range [0, 2*pi)
    double delta = 0;              // regularity cutoff: s < delta is Singular

    static DomainSpec norm_ball(double T, double delta = 0);
    static DomainSpec hyperbolic_ball(double t, double delta = 0);
    static DomainSpec sector(double t, AngleInterval arc2, double delta = 0);
    static DomainSpec bisector(double t, AngleInterval arc1, AngleInterval arc2, double delta = 0);

    // Every domain reduces to a Frobenius bound: ||g||_F^2 <= T^2, resp. 2 cosh t.
    double frobenius_sq_bound() const {
        return kind == Kind::NormBall ? radius * radius : 2.0 * std::cosh(radius);
    }
    double hyperbolic_radius() const {
        return kind == Kind::NormBall ? std::acosh(std::max(1.0, radius * radius / 2.0)) : radius;
    }
    bool has_arc1() const { return kind == Kind::Bisector; }
    bool has_arc2() const { return kind == Kind::Sector || kind == Kind::Bisector; }
};

CartanCoords cartan_decompose(const Mat2& g);
CartanCoords cartan_decompose(const Mat3& g);

Mat2 reconstruct(const CartanCoords& c);
Mat3 reconstruct3(const CartanCoords& c);

double hyperbolic_distance(const Mat2& g);
double hyperbolic_distance(const IntMat& g);

enum class Classification { Inside, Outside, Singular };

Classification classify(const Mat2& g, const DomainSpec& domain);
Classification classify(const IntMat& g, const DomainSpec& domain);

// Displacement of the Cartan coordinates of u*g*v relative to those of g,
// measured as max of |d phi| (circle of circumference pi), |d psi| (2*pi),
// and the chamber displacement max_i |d log_a_i|.
double cartan_displacement(const Mat2& g, const Mat2& u, const Mat2& v);

struct EffectiveCartanReport {
    double ell_observed = 0;  // max displacement / eps over the trials
    double max_displacement = 0;
    int trials = 0;
};

// Samples perturbations u, v with ||u - I||_F <= eps and reports the largest
// observed displacement ratio.  Requires g delta-regular and eps < delta / 2.
EffectiveCartanReport effective_cartan_check(const Mat2& g, double delta, double eps,
                                             int trials, uint64_t seed);

}  // namespace latcount
