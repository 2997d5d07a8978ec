#include "latcount/haar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "latcount/rng.hpp"

namespace latcount::haar {

double xi_density(double s, Group group) {
    if (s < 0) throw std::invalid_argument("xi_density: s must be in the closed chamber (s >= 0)");
    double one_root = std::exp(s) - std::exp(-s);
    if (group == Group::SL2) return one_root;
    // SL3 profile along log a = (s, 0, -s): roots s, s, 2s.
    return one_root * one_root * (std::exp(2 * s) - std::exp(-2 * s));
}

double ball_volume(double t) { return kTwoPi * (std::cosh(t) - 1.0); }

double volume(const DomainSpec& domain) {
    switch (domain.kind) {
        case DomainSpec::Kind::NormBall:
            return kPi * (domain.radius * domain.radius - 2.0);
        case DomainSpec::Kind::HyperbolicBall:
            return ball_volume(domain.radius);
        case DomainSpec::Kind::Sector:
            return domain.arc2.length() / kTwoPi * ball_volume(domain.radius);
        case DomainSpec::Kind::Bisector:
            return domain.arc1.length() / kPi * domain.arc2.length() / kTwoPi *
                   ball_volume(domain.radius);
    }
    throw std::invalid_argument("volume: invalid domain");
}

double sl2z_covolume() { return kPi / 6.0; }

double neighborhood_volume(double eps) {
    if (!(eps > 0)) throw std::invalid_argument("neighborhood_volume: eps must be > 0");
    // ||k_phi a_s k_psi - I||^2 = 4 cosh^2(s/2) + 2 - 2 cosh s ... reduces to
    // 2 cosh s + 2 - 4 cosh(s/2) cos(theta) with theta = phi + psi, so
    //   m(O_eps) = int_0^{s_max} arccos(h(s)) xi(s) ds,
    //   h(s) = cosh(s/2) - eps^2 / (4 cosh(s/2)),
    // where the theta-measure of {cos theta >= h} is 2 arccos(h) and the
    // angular marginals contribute a net factor collapsing to 1.
    double cmax = 0.5 * (1.0 + std::sqrt(1.0 + eps * eps));
    double s_max = 2.0 * std::acosh(std::max(1.0, cmax));
    auto integrand = [&](double s) {
        double c = std::cosh(0.5 * s);
        double h = c - eps * eps / (4.0 * c);
        if (h >= 1.0) return 0.0;
        return std::acos(std::max(-1.0, h)) * xi_density(s, Group::SL2);
    };
    const int n = 8192;  // composite Simpson; integrand has a sqrt endpoint
    double hstep = s_max / n;
    double acc = integrand(0.0) + integrand(s_max);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * integrand(i * hstep);
    return acc * hstep / 3.0;
}

namespace {

// Inverse radial CDF on [lo, hi]: P(s' <= s) proportional to cosh s - cosh lo.
double invert_radial_cdf(double lo, double hi, double u) {
    double clo = std::cosh(lo), chi = std::cosh(hi);
    double target = clo + u * (chi - clo);
    double a = lo, b = hi;
    for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
        double mid = 0.5 * (a + b);
        (std::cosh(mid) < target ? a : b) = mid;
    }
    return 0.5 * (a + b);
}

}  // namespace

HaarSample sample_one(const DomainSpec& domain, uint64_t seed, uint64_t index) {
    double t = domain.hyperbolic_radius();
    double s = invert_radial_cdf(0.0, t, rng_unit_open(seed, 1, index));
    double u2 = rng_unit(seed, 2, index);
    double u3 = rng_unit(seed, 3, index);
    double phi = domain.has_arc1() ? domain.arc1.lo + u2 * domain.arc1.length() : u2 * kPi;
    double psi = domain.has_arc2() ? domain.arc2.lo + u3 * domain.arc2.length() : u3 * kTwoPi;
    Mat2 g = Mat2::rotation(phi) * Mat2::chamber(s) * Mat2::rotation(psi);
    return {phi, s, psi, g};
}

std::vector<HaarSample> sample_haar(const DomainSpec& domain, size_t count, uint64_t seed) {
    std::vector<HaarSample> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i) out.push_back(sample_one(domain, seed, i));
    return out;
}

RoundednessReport well_roundedness_probe(const DomainSpec& domain,
                                         const std::vector<double>& eps_grid, uint64_t seed,
                                         size_t shell_samples, int uv_pairs) {
    if (eps_grid.size() < 4)
        throw std::invalid_argument("well_roundedness_probe: need at least 4 eps values");
    for (double e : eps_grid)
        if (!(e > 0 && e <= 0.1))
            throw std::invalid_argument("well_roundedness_probe: eps must be in (0, 0.1]");

    const double r = domain.hyperbolic_radius();
    const double vol_b = volume(domain);
    const int batches = 32;
    const size_t per_batch = shell_samples / batches;

    RoundednessReport report;
    for (size_t ei = 0; ei < eps_grid.size(); ++ei) {
        double eps = eps_grid[ei];
        double s_lo = std::max(0.0, r * (1.0 - 3.0 * eps));
        double s_hi = r * (1.0 + 3.0 * eps);
        double m_shell = kTwoPi * (std::cosh(s_hi) - std::cosh(s_lo));

        // Fixed perturbation pairs for this eps; direction j = 0 is (I, I) so
        // that membership of g itself is always part of both tests.
        std::vector<Mat2> us, vs;
        for (int j = 0; j < uv_pairs; ++j) {
            uint64_t k = static_cast<uint64_t>(ei) * 1000 + static_cast<uint64_t>(j);
            us.push_back(sl2_perturbation(rng_gauss(seed, 31, 3 * k), rng_gauss(seed, 32, 3 * k),
                                          rng_gauss(seed, 33, 3 * k), eps * 0.999));
            vs.push_back(sl2_perturbation(rng_gauss(seed, 41, 3 * k), rng_gauss(seed, 42, 3 * k),
                                          rng_gauss(seed, 43, 3 * k), eps * 0.999));
        }

        std::vector<double> batch_ratio(batches, 0.0);
        for (int b = 0; b < batches; ++b) {
            int64_t n_plus = 0;   // in sampled B+ but not in B
            int64_t n_minus = 0;  // in B but not in sampled B-
            for (size_t i = 0; i < per_batch; ++i) {
                uint64_t idx = (static_cast<uint64_t>(b) * per_batch + i) +
                               (static_cast<uint64_t>(ei) << 40);
                double s = invert_radial_cdf(s_lo, s_hi, rng_unit_open(seed, 4, idx));
                double phi = rng_unit(seed, 5, idx) * kPi;
                double psi = rng_unit(seed, 6, idx) * kTwoPi;
                Mat2 g = Mat2::rotation(phi) * Mat2::chamber(s) * Mat2::rotation(psi);

                bool in_b = classify(g, domain) != Classification::Outside;
                if (in_b) {
                    bool all_in = true;
                    for (int j = 0; j < uv_pairs && all_in; ++j)
                        all_in = classify(us[j] * g * vs[j], domain) != Classification::Outside;
                    if (!all_in) ++n_minus;
                } else {
                    bool any_in = false;
                    for (int j = 0; j < uv_pairs && !any_in; ++j)
                        any_in = classify(us[j] * g * vs[j], domain) != Classification::Outside;
                    if (any_in) ++n_plus;
                }
            }
            double vol_plus = vol_b + m_shell * double(n_plus) / double(per_batch);
            double vol_minus = vol_b - m_shell * double(n_minus) / double(per_batch);
            batch_ratio[b] = vol_plus / vol_minus;
        }

        double mean = std::accumulate(batch_ratio.begin(), batch_ratio.end(), 0.0) / batches;
        double var = 0;
        for (double x : batch_ratio) var += (x - mean) * (x - mean);
        var /= (batches - 1.0) * batches;  // variance of the mean
        double se = std::sqrt(var);
        double excess = mean - 1.0;
        double rel_se = excess > 0 ? se / excess : 1.0;
        if (rel_se > 0.10)
            throw InsufficientSamples("well_roundedness_probe: relative standard error > 10%");

        report.eps.push_back(eps);
        report.ratio.push_back(mean);
        report.rel_se.push_back(rel_se);
    }

    // least squares slope of log(ratio - 1) against log(eps)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (size_t i = 0; i < report.eps.size(); ++i) {
        if (report.ratio[i] <= 1.0) continue;
        double x = std::log(report.eps[i]), y = std::log(report.ratio[i] - 1.0);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++m;
    }
    if (m >= 2) report.fitted_a = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return report;
}

}  // namespace latcount::haar
