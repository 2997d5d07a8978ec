#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

// Predicted constants and exponents: the mean-ergodic error constant and the
// counting exponents for height balls, metric balls, sectors, bisectors and
// affine bisectors, plus the Harish-Chandra function of SL2(R) (Archimedean
// quadrature) and of PGL2 over a q-adic field (exact tree recursion), and the
// adelic integrability dichotomy via prime partial products.
//
// All exponent formulas return the eta = 0 value; the experiment layer adds
// its configurable eta slack before forming testable bounds.

namespace latcount::rates {

struct LocalDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 1 if p = 2, otherwise the least even integer >= p/2.
int n_e(double p);

struct SpectralProfile {
    double p = 2;      // integrability exponent: L^{p+}
    int ne = 1;
    double kappa = 0.5;  // norm-decay exponent: (2 n_e)^-1, or 1/p with the
                         // sharp-spectrum improvement
    static SpectralProfile from_p(double p, bool sharp_spectrum = false);
};

struct GroupProfile {
    double dim_G = 3;
    double dim_K = 1;
    double rho = 3;       // upper local dimension in use (dim_G, or dim_G - dim_K
                          // for bi-K-invariant families)
    double a = 1;         // Holder well-roundedness exponent
    double c = 6;         // Holder constant (empirical bound for norm balls)
    double alpha = 1;     // volume growth exponent of D_t
    double alpha0 = 0;    // growth exponent of the singular part
    double covolume = 0;  // V(Gamma) under the fixed normalization
    double eps0 = 0.1;    // injectivity radius eps0(e, Gamma)

    static GroupProfile sl2z(bool bi_k_invariant);
};

// A = (4/m0)^{a/(rho+a)} * (c / vol_O_eps0)^{rho/(rho+a)}
double error_constant_A(double m0, double rho, double a, double c, double vol_O_eps0);

// relative-error decay exponent in volume: kappa * a / (rho + a)
double counting_exponent(double kappa, double a, double rho);

// Height-ball counting exponent 1 - S^-1 * a/(a+d) with spectral factor
// S = 2 n_e(p), or S = p under the sharp-spectrum improvement.
double height_ball_exponent(double p, double a, double d, bool sharp_spectrum = false);

struct SlmProfile {
    int m;
    double p;         // 2(m-1)
    double d;         // m(m+1)/2 - 1
    double a;         // 1 (self-adjoint real balls)
    double exponent;  // 1 - 1/(m^3 - m)
};
// SL_m(Z) with Hilbert-Schmidt balls; bi-K-invariant and sharp-spectrum, so
// the spectral factor is p and the exponent collapses to 1 - 1/(m^3 - m).
SlmProfile slm_profile(int m);

struct SectorRate {
    double main_exponent;      // main term ~ psi * e^{(m-1) t}
    double error_exponent;     // (m-1)(1 - n_e^-1 / (m(m+1)+2))
    double relative_exponent;  // main - error, the relative decay rate in t
};
SectorRate hyperbolic_sector_rate(int m, double p, double psi);

// metric balls: 1 - (1 - sqrt(3r^2+1)/2) / (n_e(p) (1+d)), r in [0, 1)
double metric_ball_exponent(double p, double d, double r);

// adelic height balls: 1 - (2 n_e(p))^-1 a / (2d + 2a)
double adelic_height_exponent(double p, double a, double d);

// congruence saving: theta = (2 n_e(p))^-1 / (1 + dim_sym)
double congruence_theta(double p, double dim_sym);

// bisectors: zeta = min{1 - alpha0/alpha, (2 n_e(p))^-1 (1 + dim G)^-1}
double bisector_zeta(double p, double dim_G, double alpha0, double alpha);

// affine bisectors: zeta = (2 n_e(p))^-1 (1 + 3 dim G)^-1
double affine_zeta(double p, double dim_G);

// Harish-Chandra function of SL2(R): the K-average of the Iwasawa modular
// factor of a_s k_theta, by adaptive quadrature to ~1e-10 after a change of
// variables that resolves the e^{-s}-width spike at large s.
double harish_chandra_real(double s);

// Spherical function of PGL2 over a q-adic field at a_v^n: exact average of
// the Busemann modular weight over the radius-n sphere of the (q+1)-regular
// tree, via the level recursion (integer arithmetic, converted at the end).
double tree_spherical(int64_t q, int n);

// Haar measure of K a^n K with m(K) = 1: the radius-n sphere count,
// (q+1) q^{n-1} for n >= 1.
double double_coset_volume(int64_t q, int n);

struct AdelicPartialProducts {
    std::vector<int64_t> primes;
    std::vector<double> log_partial_products;  // cumulative log Prod_{q <= prime} local(q)
    double log_at(int64_t bound) const;        // last partial at primes <= bound
};

// local(q) = 1 + sum_{n>=1} tree_spherical(q,n)^p_exp * double_coset_volume(q,n),
// truncated at 1e-15 relative tail.  Throws LocalDivergence for p_exp <= 2
// (each local factor already diverges there).
AdelicPartialProducts adelic_hc_partial_product(double p_exp, int64_t prime_bound);

}  // namespace latcount::rates
