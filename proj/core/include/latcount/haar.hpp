#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latcount/cartan.hpp"

// Haar volumes and sampling under one fixed normalization.
//
// Normalization "sl2-hyparea-unitK": in K A+ K coordinates (phi in [0, pi),
// s >= 0, psi in [0, 2*pi)) the Haar measure of SL2(R) is
//
//     dm = (2*pi)^-1 dphi * xi(s) ds * dpsi,     xi(s) = e^s - e^-s,
//
// i.e. the k1- and k2-marginals are uniform probability measures on their
// fundamental ranges and the radial density is 2*pi*sinh(s).  This pushes
// forward to hyperbolic area (curvature -1) on G/K with unit-mass fibers, so
// vol(HyperbolicBall(t)) = 2*pi*(cosh t - 1), and the covolume of SL2(Z) is
// area(PSL2(Z)\H^2)/2 = pi/6 (the division by 2 because -I acts trivially,
// making the generic K-fiber of G/Gamma a half circle).
//
// Every count, volume and covolume in this project uses this normalization;
// its id is stamped into all experiment output.

namespace latcount::haar {

inline constexpr const char* kNormalizationId = "sl2-hyparea-unitK";

enum class Group { SL2, SL3Profile };

// Radial density of the K A+ K decomposition: product over positive roots of
// e^{alpha(log a)} - e^{-alpha(log a)}.  The SL3 profile is evaluated along
// the central chamber ray log a = (s, 0, -s).
double xi_density(double s, Group group = Group::SL2);

// 2*pi*(cosh t - 1)
double ball_volume(double t);

double volume(const DomainSpec& domain);

// pi/6 under this normalization
double sl2z_covolume();

// Haar measure of O_eps = {u in SL2(R): ||u - I||_F <= eps}, by quadrature in
// K A+ K coordinates (||k a_s k' - I||^2 = 2 cosh s + 2 - 4 cosh(s/2) cos(phi+psi)
// depends only on s and phi+psi, so this is a 2-d integral).  O_eps is exactly
// symmetric: ||u^-1 - I||_F = ||u - I||_F on SL2.
double neighborhood_volume(double eps);

struct NeighborhoodSpec {
    double eps = 0.1;  // must stay below eps1
    double rho = 3;    // local dimension: 3 for SL2, 2 when bi-K-invariance applies
    double m0 = 0;     // lower density constant in m(O_eps) >= m0 * eps^rho
    double eps1 = 0.1; // validity threshold (not fixed by theory; configuration)
};

struct HaarSample {
    double phi, s, psi;
    Mat2 g;
};

// Deterministic i.i.d. Haar sample of the domain: the radial CDF is inverted
// by bisection to 1e-12 and the angles are uniform on the domain's arcs.
// sample index i depends only on (seed, i), so any partition of the index
// range across workers reproduces the same stream.
HaarSample sample_one(const DomainSpec& domain, uint64_t seed, uint64_t index);

std::vector<HaarSample> sample_haar(const DomainSpec& domain, size_t count, uint64_t seed);

struct InsufficientSamples : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RoundednessReport {
    std::vector<double> eps;
    std::vector<double> ratio;        // vol(B+(eps)) / vol(B-(eps)) estimates
    std::vector<double> rel_se;       // relative standard error of ratio - 1
    double fitted_a = 0;              // least squares slope of log(ratio-1) vs log eps
};

// Monte Carlo Holder well-roundedness probe.  Samples a shell around the
// boundary (radial coordinate within [r(1-3 eps), r(1+3 eps)]; the interior is
// unaffected by the perturbations), tests membership of u*g*v over sampled
// u, v in O_eps, and fits the exponent from log(ratio - 1) vs log(eps).
// Raises InsufficientSamples if any grid point's shell estimate has relative
// standard error above 10%.
RoundednessReport well_roundedness_probe(const DomainSpec& domain,
                                         const std::vector<double>& eps_grid, uint64_t seed,
                                         size_t shell_samples = 200000, int uv_pairs = 32);

}  // namespace latcount::haar
