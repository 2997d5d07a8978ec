#include "latcount/rates.hpp"

#include <algorithm>
#include <cmath>

namespace latcount::rates {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Adaptive Simpson with absolute tolerance.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0) throw std::runtime_error("harish_chandra_real: quadrature did not converge");
    if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Relative tolerance: the absolute budget is scaled by a first coarse pass.
template <typename F>
double integrate(const F& f, double a, double b, double rel_tol) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double tol = rel_tol * std::max(std::fabs(whole), 1e-300);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

int n_e(double p) {
    require(p >= 2, "n_e: p must be >= 2");
    if (p == 2) return 1;
    int m = static_cast<int>(std::ceil(p / 2.0 - 1e-12));
    if (m % 2 != 0) ++m;
    return m;
}

SpectralProfile SpectralProfile::from_p(double p, bool sharp_spectrum) {
    SpectralProfile sp;
    sp.p = p;
    sp.ne = n_e(p);
    sp.kappa = sharp_spectrum ? 1.0 / p : 1.0 / (2.0 * sp.ne);
    return sp;
}

GroupProfile GroupProfile::sl2z(bool bi_k_invariant) {
    GroupProfile g;
    g.dim_G = 3;
    g.dim_K = 1;
    g.rho = bi_k_invariant ? 2 : 3;
    g.a = 1;
    g.c = 6;
    g.alpha = 1;
    g.alpha0 = 0;
    g.covolume = kPi / 6.0;
    g.eps0 = 0.1;
    return g;
}

double error_constant_A(double m0, double rho, double a, double c, double vol_O_eps0) {
    require(m0 > 0 && rho > 0 && a > 0 && c > 0 && vol_O_eps0 > 0,
            "error_constant_A: all inputs must be positive");
    return std::pow(4.0 / m0, a / (rho + a)) * std::pow(c / vol_O_eps0, rho / (rho + a));
}

double counting_exponent(double kappa, double a, double rho) {
    require(kappa >= 0 && a > 0 && rho > 0, "counting_exponent: bad inputs");
    return kappa * a / (rho + a);
}

double height_ball_exponent(double p, double a, double d, bool sharp_spectrum) {
    require(a > 0 && d > 0, "height_ball_exponent: a, d must be positive");
    double spectral = sharp_spectrum ? p : 2.0 * n_e(p);
    return 1.0 - (1.0 / spectral) * a / (a + d);
}

SlmProfile slm_profile(int m) {
    require(m >= 2, "slm_profile: m must be >= 2");
    SlmProfile s;
    s.m = m;
    s.p = 2.0 * (m - 1);
    s.d = m * (m + 1) / 2.0 - 1.0;
    s.a = 1.0;
    s.exponent = height_ball_exponent(s.p, s.a, s.d, /*sharp_spectrum=*/true);
    return s;
}

SectorRate hyperbolic_sector_rate(int m, double p, double psi) {
    require(m >= 2, "hyperbolic_sector_rate: m must be >= 2");
    require(psi > 0 && psi <= 2.0 * kPi, "hyperbolic_sector_rate: psi must be in (0, 2pi]");
    double ne = n_e(p);
    SectorRate r;
    r.main_exponent = m - 1.0;
    r.relative_exponent = (m - 1.0) / (ne * (m * (m + 1.0) + 2.0));
    r.error_exponent = r.main_exponent - r.relative_exponent;
    return r;
}

double metric_ball_exponent(double p, double d, double r) {
    require(r >= 0 && r < 1, "metric_ball_exponent: r must be in [0, 1)");
    require(d > 0, "metric_ball_exponent: d must be positive");
    return 1.0 - (1.0 - std::sqrt(3.0 * r * r + 1.0) / 2.0) / (n_e(p) * (1.0 + d));
}

double adelic_height_exponent(double p, double a, double d) {
    require(a > 0 && d > 0, "adelic_height_exponent: a, d must be positive");
    return 1.0 - (1.0 / (2.0 * n_e(p))) * a / (2.0 * d + 2.0 * a);
}

double congruence_theta(double p, double dim_sym) {
    require(dim_sym > 0, "congruence_theta: dim must be positive");
    return (1.0 / (2.0 * n_e(p))) / (1.0 + dim_sym);
}

double bisector_zeta(double p, double dim_G, double alpha0, double alpha) {
    require(alpha > alpha0 && alpha0 >= 0, "bisector_zeta: need 0 <= alpha0 < alpha");
    require(dim_G > 0, "bisector_zeta: dim G must be positive");
    double zeta0 = 1.0 - alpha0 / alpha;
    double zeta1 = (1.0 / (2.0 * n_e(p))) / (1.0 + dim_G);
    return std::min(zeta0, zeta1);
}

double affine_zeta(double p, double dim_G) {
    require(dim_G > 0, "affine_zeta: dim G must be positive");
    return (1.0 / (2.0 * n_e(p))) / (1.0 + 3.0 * dim_G);
}

double harish_chandra_real(double s) {
    require(s >= 0, "harish_chandra_real: s must be >= 0");
    if (s < 1e-12) return 1.0;

    // Xi(s) = (2/pi) int_0^{pi/2} (e^-s + 2 sinh(s) sin^2 psi)^{-1/2} dpsi.
    // The integrand spikes to e^{s/2} in a window of width ~e^-s at psi = 0,
    // which no fixed grid resolves for large s, so split at sin(psi) = 1/2 and
    // substitute sin(psi) = c sinh(v) on the head, which flattens it to a
    // bounded smooth integrand:
    //   head = (2 sinh s)^{-1/2} int_0^V (1 - c^2 sinh^2 v)^{-1/2} dv,
    //   c = e^{-s/2} / sqrt(2 sinh s),  V = arcsinh(1/(2c)).
    const double sinh_s = std::sinh(s);
    const double c = std::exp(-0.5 * s) / std::sqrt(2.0 * sinh_s);
    const double V = std::asinh(0.5 / c);
    auto head_f = [&](double v) {
        double cs = c * std::sinh(v);
        return 1.0 / std::sqrt(1.0 - cs * cs);
    };
    double head = integrate(head_f, 0.0, V, 1e-12) / std::sqrt(2.0 * sinh_s);

    auto tail_f = [&](double psi) {
        double sp = std::sin(psi);
        return 1.0 / std::sqrt(std::exp(-s) + 2.0 * sinh_s * sp * sp);
    };
    double tail = integrate(tail_f, kPi / 6.0, kPi / 2.0, 1e-12);

    return 2.0 / kPi * (head + tail);
}

double tree_spherical(int64_t q, int n) {
    require(q >= 2, "tree_spherical: q must be a prime >= 2");
    require(n >= 0, "tree_spherical: n must be >= 0");
    if (n == 0) return 1.0;
    // Average of q^{h(y)/2} over the radius-n sphere S_n, h = Busemann value
    // of y for the end fixed by the Iwasawa parabolic.  Per level the sphere
    // splits into the single on-ray vertex (h = n, weight q^{(h+n)/2} = q^n
    // after clearing the q^{-n/2} prefactor) and off-ray classes; each
    // off-ray vertex has q children one Busemann step down and the ray vertex
    // spawns q - 1 fresh off-ray vertices at h = n - 1.  Writing the cleared
    // off-ray weight sum as M(n) = q^{n-1} a_n, the recursion
    //   M(n+1) = q M(n) + (q-1) q^n,  M(1) = q
    // becomes a_{n+1} = a_n + (q-1), exact in int64 at any depth.
    int64_t a = q;
    for (int k = 1; k < n; ++k) a += q - 1;
    // Xi(n) = q^{-n/2} (q^n + M(n)) / |S_n|, |S_n| = (q+1) q^{n-1}
    return static_cast<double>(q + a) /
           (static_cast<double>(q + 1) * std::exp(0.5 * n * std::log(static_cast<double>(q))));
}

double double_coset_volume(int64_t q, int n) {
    require(q >= 2, "double_coset_volume: q must be a prime >= 2");
    require(n >= 0, "double_coset_volume: n must be >= 0");
    if (n == 0) return 1.0;
    return static_cast<double>(q + 1) *
           std::exp((n - 1) * std::log(static_cast<double>(q)));
}

double AdelicPartialProducts::log_at(int64_t bound) const {
    double v = 0;
    for (size_t i = 0; i < primes.size(); ++i) {
        if (primes[i] > bound) break;
        v = log_partial_products[i];
    }
    return v;
}

AdelicPartialProducts adelic_hc_partial_product(double p_exp, int64_t prime_bound) {
    if (p_exp <= 2)
        throw LocalDivergence("adelic_hc_partial_product: local factors diverge for p_exp <= 2");
    require(prime_bound >= 2 && prime_bound <= 1'000'000,
            "adelic_hc_partial_product: prime_bound must be in [2, 10^6]");

    std::vector<bool> sieve(static_cast<size_t>(prime_bound) + 1, true);
    AdelicPartialProducts out;
    double cum = 0;
    for (int64_t q = 2; q <= prime_bound; ++q) {
        if (!sieve[static_cast<size_t>(q)]) continue;
        for (int64_t k = q * q; k <= prime_bound; k += q) sieve[static_cast<size_t>(k)] = false;

        double sum = 0;
        for (int n = 1; n < 100000; ++n) {
            double term = std::pow(tree_spherical(q, n), p_exp) * double_coset_volume(q, n);
            sum += term;
            if (term < 1e-15 * (1.0 + sum)) break;
        }
        cum += std::log1p(sum);
        out.primes.push_back(q);
        out.log_partial_products.push_back(cum);
    }
    return out;
}

}  // namespace latcount::rates
