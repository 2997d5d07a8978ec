#include "latcount/cartan.hpp"

#include <algorithm>
#include <cmath>

#include "latcount/rng.hpp"

namespace latcount {

namespace {

double wrap_two_pi(double x) {
    x = std::fmod(x, kTwoPi);
    if (x < 0) x += kTwoPi;
    if (x >= kTwoPi) x = 0;
    return x;
}

double circle_distance(double a, double b, double period) {
    double d = std::fabs(a - b);
    d = std::fmod(d, period);
    return std::min(d, period - d);
}

void check_unimodular(double det) {
    if (std::fabs(det - 1.0) > 1e-8) throw NonUnimodular("cartan_decompose: det must be 1");
}

}  // namespace

Mat2 sl2_exp(double x, double y, double z) {
    // X = [[x, y], [z, -x]], X^2 = (x^2 + yz) I
    double mu2 = x * x + y * z;
    double c, s;  // exp(X) = c*I + s*X
    if (mu2 > 1e-24) {
        double mu = std::sqrt(mu2);
        c = std::cosh(mu);
        s = std::sinh(mu) / mu;
    } else if (mu2 < -1e-24) {
        double m = std::sqrt(-mu2);
        c = std::cos(m);
        s = std::sin(m) / m;
    } else {
        c = 1.0 + 0.5 * mu2;
        s = 1.0 + mu2 / 6.0;
    }
    return {c + s * x, s * y, s * z, c - s * x};
}

DomainSpec DomainSpec::norm_ball(double T, double delta) {
    if (!(T >= std::sqrt(2.0))) throw std::invalid_argument("NormBall: T must be >= sqrt(2)");
    if (delta < 0) throw std::invalid_argument("delta must be >= 0");
    DomainSpec d;
    d.kind = Kind::NormBall;
    d.radius = T;
    d.delta = delta;
    return d;
}

DomainSpec DomainSpec::hyperbolic_ball(double t, double delta) {
    if (!(t >= 0)) throw std::invalid_argument("HyperbolicBall: t must be >= 0");
    if (delta < 0) throw std::invalid_argument("delta must be >= 0");
    DomainSpec d;
    d.kind = Kind::HyperbolicBall;
    d.radius = t;
    d.delta = delta;
    return d;
}

DomainSpec DomainSpec::sector(double t, AngleInterval arc2, double delta) {
    DomainSpec d = hyperbolic_ball(t, delta);
    if (!(arc2.lo >= 0 && arc2.hi <= kTwoPi && arc2.length() > 0))
        throw std::invalid_argument("Sector: arc2 must be a positive interval inside [0, 2pi)");
    d.kind = Kind::Sector;
    d.arc2 = arc2;
    return d;
}

DomainSpec DomainSpec::bisector(double t, AngleInterval arc1, AngleInterval arc2, double delta) {
    DomainSpec d = sector(t, arc2, delta);
    if (!(arc1.lo >= 0 && arc1.hi <= kPi && arc1.length() > 0))
        throw std::invalid_argument("Bisector: arc1 must be a positive interval inside [0, pi)");
    d.kind = Kind::Bisector;
    d.arc1 = arc1;
    return d;
}

CartanCoords cartan_decompose(const Mat2& g) {
    check_unimodular(g.det());
    CartanCoords out;
    out.n = 2;

    double F = g.frobenius_sq();
    double cosh_s = std::max(1.0, 0.5 * F);
    double s = std::acosh(cosh_s);

    if (s < 1e-14) {
        // g is (numerically) a rotation; the a-part is I and any angle split
        // works.  Convention: k2 in {I, -I}, the rest of the angle goes to k1.
        double theta = wrap_two_pi(std::atan2(g.c, g.a));
        if (theta < kPi) {
            out.phi = theta;
            out.psi = 0;
        } else {
            out.phi = theta - kPi;
            out.psi = kPi;
        }
        out.log_a = {0, 0, 0};
        return out;
    }

    // g^T g = rot(-psi) diag(e^s, e^-s) rot(psi); alpha diagonalizes it with
    // the large eigenvalue first, and the eigenvector pair is well separated
    // whenever s is not tiny.
    double p = g.a * g.a + g.c * g.c;
    double r = g.b * g.b + g.d * g.d;
    double q = g.a * g.b + g.c * g.d;
    double alpha = 0.5 * std::atan2(2.0 * q, p - r);
    double psi = wrap_two_pi(-alpha);

    Mat2 k2inv_ainv = Mat2::rotation(-psi) * Mat2{std::exp(-0.5 * s), 0, 0, std::exp(0.5 * s)};
    Mat2 k1 = g * k2inv_ainv;
    double phi = wrap_two_pi(std::atan2(k1.c, k1.a));
    if (phi >= kPi) {  // absorb -I into k2 (the M-quotient)
        phi -= kPi;
        psi = wrap_two_pi(psi + kPi);
    }

    out.phi = phi;
    out.psi = psi;
    out.log_a = {0.5 * s, -0.5 * s, 0};
    return out;
}

Mat2 reconstruct(const CartanCoords& c) {
    return Mat2::rotation(c.phi) * Mat2::chamber(c.log_a[0] - c.log_a[1]) * Mat2::rotation(c.psi);
}

namespace {

double det3x3(const Mat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
         - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
         + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Mat3 matmul3(const Mat3& a, const Mat3& b) {
    Mat3 out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
            out[i][j] = s;
        }
    return out;
}

Mat3 transpose3(const Mat3& a) {
    Mat3 out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i][j] = a[j][i];
    return out;
}

}  // namespace

CartanCoords cartan_decompose(const Mat3& g) {
    check_unimodular(det3x3(g));

    // One-sided Jacobi SVD: right rotations orthogonalize the columns of
    // w = g v without ever forming g^T g, which keeps the small singular
    // value accurate even when the spread is large.
    Mat3 w = g;
    Mat3 v = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    for (int sweep = 0; sweep < 64; ++sweep) {
        bool converged = true;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                double a = 0, b = 0, c = 0;
                for (int k = 0; k < 3; ++k) {
                    a += w[k][p] * w[k][p];
                    b += w[k][q] * w[k][q];
                    c += w[k][p] * w[k][q];
                }
                if (std::fabs(c) <= 1e-15 * std::sqrt(a * b)) continue;
                converged = false;
                double theta = 0.5 * std::atan2(-2.0 * c, a - b);
                double co = std::cos(theta), si = std::sin(theta);
                for (Mat3* m : {&w, &v})
                    for (int k = 0; k < 3; ++k) {
                        double mp = (*m)[k][p], mq = (*m)[k][q];
                        (*m)[k][p] = co * mp - si * mq;
                        (*m)[k][q] = si * mp + co * mq;
                    }
            }
        if (converged) break;
    }

    std::array<double, 3> sigma;
    for (int j = 0; j < 3; ++j)
        sigma[static_cast<size_t>(j)] =
            std::sqrt(w[0][j] * w[0][j] + w[1][j] * w[1][j] + w[2][j] * w[2][j]);

    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int i, int j) {
        return sigma[static_cast<size_t>(i)] > sigma[static_cast<size_t>(j)];
    });
    Mat3 ws{}, vs{};
    std::array<double, 3> ss;
    for (int j = 0; j < 3; ++j) {
        ss[static_cast<size_t>(j)] = sigma[static_cast<size_t>(idx[static_cast<size_t>(j)])];
        for (int i = 0; i < 3; ++i) {
            ws[i][j] = w[i][idx[static_cast<size_t>(j)]];
            vs[i][j] = v[i][idx[static_cast<size_t>(j)]];
        }
    }
    // keep v proper; flipping the same column of w preserves g = w v^T
    if (det3x3(vs) < 0)
        for (int i = 0; i < 3; ++i) {
            vs[i][2] = -vs[i][2];
            ws[i][2] = -ws[i][2];
        }

    CartanCoords out;
    out.n = 3;
    for (int i = 0; i < 3; ++i)
        out.log_a[i] = std::log(std::max(ss[static_cast<size_t>(i)], 1e-300));
    double mean = (out.log_a[0] + out.log_a[1] + out.log_a[2]) / 3.0;
    for (int i = 0; i < 3; ++i) out.log_a[i] -= mean;  // det is exactly 1

    out.k2m = transpose3(vs);
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) ws[i][j] /= ss[static_cast<size_t>(j)];
    out.k1m = ws;
    return out;
}

Mat3 reconstruct3(const CartanCoords& c) {
    Mat3 a{};
    for (int i = 0; i < 3; ++i) a[i][i] = std::exp(c.log_a[i]);
    return matmul3(c.k1m, matmul3(a, c.k2m));
}

double hyperbolic_distance(const Mat2& g) {
    return std::acosh(std::max(1.0, 0.5 * g.frobenius_sq()));
}

double hyperbolic_distance(const IntMat& g) {
    if (g.n() != 2) throw std::invalid_argument("hyperbolic_distance: 2x2 only");
    return std::acosh(std::max(1.0, 0.5 * static_cast<double>(frobenius_sq(g))));
}

namespace {

Classification classify_radial_ok(const Mat2& g, const DomainSpec& domain) {
    double s = hyperbolic_distance(g);
    if (s < domain.delta) return Classification::Singular;
    if (!domain.has_arc1() && !domain.has_arc2()) return Classification::Inside;
    CartanCoords c = cartan_decompose(g);
    if (domain.has_arc1() && !domain.arc1.contains(c.phi)) return Classification::Outside;
    if (domain.has_arc2() && !domain.arc2.contains(c.psi)) return Classification::Outside;
    return Classification::Inside;
}

}  // namespace

Classification classify(const Mat2& g, const DomainSpec& domain) {
    if (g.frobenius_sq() > domain.frobenius_sq_bound()) return Classification::Outside;
    return classify_radial_ok(g, domain);
}

Classification classify(const IntMat& g, const DomainSpec& domain) {
    if (g.n() != 2) throw std::invalid_argument("classify: 2x2 only");
    // exact radial test, then the (floating) angular tests
    int64_t bound = static_cast<int64_t>(std::floor(domain.frobenius_sq_bound() + 1e-9));
    if (frobenius_sq(g) > bound) return Classification::Outside;
    return classify_radial_ok(Mat2::from(g), domain);
}

double cartan_displacement(const Mat2& g, const Mat2& u, const Mat2& v) {
    CartanCoords base = cartan_decompose(g);
    CartanCoords pert = cartan_decompose(u * g * v);
    // The K-components live on (R/2pi)^2 modulo the simultaneous M-flip
    // (phi, psi) ~ (phi + pi, psi + pi); measure in that quotient so the
    // stored-representative jump at the phi = 0 wall does not register.
    double ang = 1e300;
    for (double flip : {0.0, kPi}) {
        double dphi = circle_distance(base.phi, pert.phi + flip, kTwoPi);
        double dpsi = circle_distance(base.psi, pert.psi + flip, kTwoPi);
        ang = std::min(ang, std::max(dphi, dpsi));
    }
    double da = std::fabs(base.radial() - pert.radial());
    return std::max(ang, da);
}

Mat2 sl2_perturbation(double x, double y, double z, double target) {
    double norm = std::sqrt(x * x + y * y + z * z);
    if (norm < 1e-300) return Mat2{};
    x /= norm; y /= norm; z /= norm;
    double lo = 0, hi = 2.0 * target + 1e-6;
    while (true) {
        Mat2 m = sl2_exp(hi * x, hi * y, hi * z);
        Mat2 d = {m.a - 1, m.b, m.c, m.d - 1};
        if (std::sqrt(d.frobenius_sq()) >= target) break;
        hi *= 2;
    }
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        Mat2 m = sl2_exp(mid * x, mid * y, mid * z);
        Mat2 d = {m.a - 1, m.b, m.c, m.d - 1};
        if (std::sqrt(d.frobenius_sq()) < target)
            lo = mid;
        else
            hi = mid;
    }
    return sl2_exp(lo * x, lo * y, lo * z);
}

EffectiveCartanReport effective_cartan_check(const Mat2& g, double delta, double eps,
                                             int trials, uint64_t seed) {
    if (delta <= 0) throw std::invalid_argument("effective_cartan_check: delta must be > 0");
    CartanCoords c = cartan_decompose(g);
    if (c.chamber_distance() < delta * (1.0 - 1e-12) - 1e-12)
        throw RegularityError("effective_cartan_check: g is not delta-regular");
    if (!(eps > 0 && eps < 0.5 * delta))
        throw std::invalid_argument("effective_cartan_check: need 0 < eps < delta/2");

    EffectiveCartanReport report;
    report.trials = trials;
    for (int i = 0; i < trials; ++i) {
        uint64_t k = static_cast<uint64_t>(i);
        Mat2 u = sl2_perturbation(rng_gauss(seed, 11, 2 * k), rng_gauss(seed, 12, 2 * k),
                                  rng_gauss(seed, 13, 2 * k), eps * 0.999);
        Mat2 v = sl2_perturbation(rng_gauss(seed, 21, 2 * k), rng_gauss(seed, 22, 2 * k),
                                  rng_gauss(seed, 23, 2 * k), eps * 0.999);
        report.max_displacement = std::max(report.max_displacement, cartan_displacement(g, u, v));
    }
    report.ell_observed = report.max_displacement / eps;
    return report;
}

}  // namespace latcount
