#include "latcount/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "latcount/haar.hpp"
#include "latcount/rng.hpp"

namespace latcount {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<double> parse_grid(const std::string& v) {
    std::vector<double> out;
    if (v.find(':') != std::string::npos) {
        auto parts = split(v, ':');
        if (parts.size() != 3) throw std::invalid_argument("grid: expected lo:hi:step");
        double lo = std::stod(parts[0]), hi = std::stod(parts[1]), step = std::stod(parts[2]);
        if (step <= 0) throw std::invalid_argument("grid: step must be positive");
        if (lo > hi) throw std::invalid_argument("grid: lo must not exceed hi");
        for (double x = lo; x <= hi + 1e-9 * step; x += step) out.push_back(x);
    } else {
        for (const auto& p : split(v, ','))
            if (!trim(p).empty()) out.push_back(std::stod(trim(p)));
    }
    for (size_t i = 1; i < out.size(); ++i)
        if (out[i] <= out[i - 1]) throw std::invalid_argument("grid must be strictly increasing");
    return out;
}

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

FitResult fit_exponent(std::span<const CountRecord> records, double target_exponent) {
    if (records.size() < 8) throw std::invalid_argument("fit_exponent: need at least 8 records");
    FitResult fit;
    fit.target_exponent = target_exponent;

    std::vector<double> xs, ys, env;
    for (const auto& r : records) {
        if (r.relative_error == 0.0) {
            ++fit.excluded_zero_errors;
            env.push_back(0.0);
            continue;
        }
        double e = std::fabs(r.relative_error);
        xs.push_back(std::log(r.volume));
        ys.push_back(std::log(e));
        env.push_back(e * std::pow(r.volume, target_exponent));
    }
    if (xs.empty()) throw DegenerateFit("fit_exponent: all relative errors are exactly zero");
    fit.used_points = static_cast<int>(xs.size());

    double n = static_cast<double>(xs.size());
    double sx = std::accumulate(xs.begin(), xs.end(), 0.0);
    double sy = std::accumulate(ys.begin(), ys.end(), 0.0);
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    fit.slope = denom != 0 ? (n * sxy - sx * sy) / denom : 0;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
        ss_res += r * r;
    }
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;

    fit.envelope_C = *std::max_element(env.begin(), env.end());
    size_t q = env.size() - (env.size() + 3) / 4;  // last quartile of the grid
    fit.envelope_last_quartile = *std::max_element(env.begin() + static_cast<long>(q), env.end());
    fit.pass = std::isfinite(fit.envelope_C) &&
               fit.envelope_last_quartile <= 2.0 * fit.envelope_C;
    return fit;
}

std::string ExperimentConfig::canonical_text() const {
    std::ostringstream os;
    auto list_d = [](const std::vector<double>& v) {
        std::string s;
        for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt17(v[i]);
        return s;
    };
    os << "arc1_hi = " << fmt17(arc1_hi) << "\n";
    os << "arc1_lo = " << fmt17(arc1_lo) << "\n";
    os << "arc2_hi = " << fmt17(arc2_hi) << "\n";
    os << "arc2_lo = " << fmt17(arc2_lo) << "\n";
    os << "bins1 = " << bins1 << "\n";
    os << "bins2 = " << bins2 << "\n";
    os << "coset = " << coset[0] << "," << coset[1] << "," << coset[2] << "," << coset[3] << "\n";
    os << "delta = " << fmt17(delta) << "\n";
    os << "domain = " << domain << "\n";
    os << "eps = " << fmt17(eps) << "\n";
    os << "eps_grid = " << list_d(eps_grid) << "\n";
    os << "eta = " << fmt17(eta) << "\n";
    os << "experiment = " << experiment << "\n";
    os << "format = " << format << "\n";
    os << "grid = " << list_d(grid) << "\n";
    std::string mods;
    for (size_t i = 0; i < moduli.size(); ++i) mods += (i ? "," : "") + std::to_string(moduli[i]);
    os << "moduli = " << mods << "\n";
    os << "modulus = " << modulus << "\n";
    os << "out = " << out << "\n";
    os << "p_exp = " << fmt17(p_exp) << "\n";
    os << "prime_bound = " << prime_bound << "\n";
    os << "radius = " << fmt17(radius) << "\n";
    os << "samples = " << samples << "\n";
    os << "seed = " << seed << "\n";
    os << "sharp_spectrum = " << (sharp_spectrum ? "true" : "false") << "\n";
    os << "t0 = " << fmt17(t0) << "\n";
    os << "target_exponent = " << fmt17(target_exponent) << "\n";
    os << "workers = " << workers << "\n";
    return os.str();
}

std::string ExperimentConfig::config_hash() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(
                      fnv1a(canonical_text() + haar::kNormalizationId)));
    return buf;
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key == "experiment") cfg.experiment = val;
        else if (key == "domain") cfg.domain = val;
        else if (key == "grid") cfg.grid = parse_grid(val);
        else if (key == "modulus") cfg.modulus = std::stoll(val);
        else if (key == "coset") {
            auto parts = split(val, ',');
            if (parts.size() != 4) throw std::invalid_argument("coset: expected 4 integers");
            for (int i = 0; i < 4; ++i) cfg.coset[static_cast<size_t>(i)] = std::stoll(trim(parts[static_cast<size_t>(i)]));
        } else if (key == "moduli") {
            cfg.moduli.clear();
            for (const auto& p : split(val, ','))
                if (!trim(p).empty()) cfg.moduli.push_back(std::stoll(trim(p)));
        } else if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "workers") cfg.workers = std::stoi(val);
        else if (key == "eta") cfg.eta = std::stod(val);
        else if (key == "delta") cfg.delta = std::stod(val);
        else if (key == "bins1") cfg.bins1 = std::stoi(val);
        else if (key == "bins2") cfg.bins2 = std::stoi(val);
        else if (key == "arc1_lo") cfg.arc1_lo = std::stod(val);
        else if (key == "arc1_hi") cfg.arc1_hi = std::stod(val);
        else if (key == "arc2_lo") cfg.arc2_lo = std::stod(val);
        else if (key == "arc2_hi") cfg.arc2_hi = std::stod(val);
        else if (key == "samples") cfg.samples = std::stoull(val);
        else if (key == "eps") cfg.eps = std::stod(val);
        else if (key == "eps_grid") {
            cfg.eps_grid.clear();
            for (const auto& p : split(val, ','))
                if (!trim(p).empty()) cfg.eps_grid.push_back(std::stod(trim(p)));
        } else if (key == "p_exp") cfg.p_exp = std::stod(val);
        else if (key == "prime_bound") cfg.prime_bound = std::stoll(val);
        else if (key == "target_exponent") cfg.target_exponent = std::stod(val);
        else if (key == "radius") cfg.radius = std::stod(val);
        else if (key == "sharp_spectrum") cfg.sharp_spectrum = (val == "true" || val == "1");
        else if (key == "t0") cfg.t0 = std::stod(val);
        else if (key == "out") cfg.out = val;
        else if (key == "format") cfg.format = val;
        else
            throw std::invalid_argument("unknown config key: " + key);
    }
    if (cfg.format != "csv" && cfg.format != "json")
        throw std::invalid_argument("format must be csv or json");
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

DomainSpec domain_from_config(const ExperimentConfig& cfg, double param) {
    if (cfg.domain == "norm-ball") return DomainSpec::norm_ball(param, cfg.delta);
    if (cfg.domain == "hyperbolic-ball") return DomainSpec::hyperbolic_ball(param, cfg.delta);
    if (cfg.domain == "sector")
        return DomainSpec::sector(param, {cfg.arc2_lo, cfg.arc2_hi}, cfg.delta);
    if (cfg.domain == "bisector")
        return DomainSpec::bisector(param, {cfg.arc1_lo, cfg.arc1_hi},
                                    {cfg.arc2_lo, cfg.arc2_hi}, cfg.delta);
    throw std::invalid_argument("unknown domain: " + cfg.domain);
}

void sweep_stream(const ExperimentConfig& cfg,
                  const std::function<void(const CountRecord&)>& emit) {
    for (double param : cfg.grid) {
        EnumerationTask task;
        task.domain = domain_from_config(cfg, param);
        if (cfg.modulus > 1)
            task.congruence = CongruenceSpec(cfg.modulus, std::span<const int64_t>(cfg.coset));
        task.mode = (task.congruence || task.domain.has_arc1() || task.domain.has_arc2())
                        ? EnumerationMode::List
                        : EnumerationMode::CountOnly;
        task.workers = cfg.workers;
        emit(enumerate_domain(task).record);
    }
}

std::vector<CountRecord> sweep(const ExperimentConfig& cfg) {
    std::vector<CountRecord> rows;
    sweep_stream(cfg, [&rows](const CountRecord& r) { rows.push_back(r); });
    return rows;
}

uint64_t AngularReport::row(int i) const {
    uint64_t s = 0;
    for (int j = 0; j < bins2; ++j) s += cells[static_cast<size_t>(i) * bins2 + j];
    return s;
}

uint64_t AngularReport::col(int j) const {
    uint64_t s = 0;
    for (int i = 0; i < bins1; ++i) s += cells[static_cast<size_t>(i) * bins2 + j];
    return s;
}

AngularReport angular_report(double t, int bins1, int bins2,
                             const std::optional<CongruenceSpec>& congruence, double delta) {
    if (bins1 < 1 || bins2 < 1) throw std::invalid_argument("angular_report: bins must be >= 1");
    EnumerationTask task;
    task.domain = DomainSpec::hyperbolic_ball(t, delta);
    task.congruence = congruence;
    task.mode = EnumerationMode::List;
    task.want_bins = true;
    task.bins1 = bins1;
    task.bins2 = bins2;
    DomainCountResult res = enumerate_domain(task);

    AngularReport rep;
    rep.bins1 = bins1;
    rep.bins2 = bins2;
    rep.cells = std::move(res.bins);
    rep.singular = res.record.singular_count;
    rep.total = res.record.count - res.record.singular_count;

    double total = static_cast<double>(rep.total);
    if (total > 0) {
        for (int j = 0; j < bins2; ++j)
            rep.discrepancy = std::max(
                rep.discrepancy, std::fabs(static_cast<double>(rep.col(j)) / total - 1.0 / bins2));
        for (int i = 0; i < bins1; ++i)
            for (int j = 0; j < bins2; ++j) {
                double cell = static_cast<double>(rep.cells[static_cast<size_t>(i) * bins2 + j]);
                double prod = static_cast<double>(rep.row(i)) * static_cast<double>(rep.col(j));
                rep.product_residual =
                    std::max(rep.product_residual, std::fabs(cell / total - prod / (total * total)));
            }
    }
    return rep;
}

UniformityReport uniformity_report(std::span<const int64_t> moduli, int64_t R) {
    UniformityReport rep;
    rep.R = R;
    double vol = haar::volume(DomainSpec::norm_ball(std::sqrt(static_cast<double>(R))));
    double covol = haar::sl2z_covolume();

    struct PerN {
        uint64_t n;
        std::unordered_map<uint64_t, uint64_t> counts;
    };
    std::vector<PerN> tables;
    for (int64_t N : moduli) {
        if (N < 1) throw std::invalid_argument("uniformity_report: moduli must be >= 1");
        tables.push_back({static_cast<uint64_t>(N), {}});
    }
    auto key_of = [](const std::array<int64_t, 4>& m, uint64_t n) {
        return ((static_cast<uint64_t>(m[0]) * n + static_cast<uint64_t>(m[1])) * n +
                static_cast<uint64_t>(m[2])) * n + static_cast<uint64_t>(m[3]);
    };

    norm_ball_list(R, [&](const IntMat& g) {
        for (auto& t : tables) {
            std::array<int64_t, 4> m;
            for (int i = 0; i < 4; ++i) {
                int64_t v = g.entries()[static_cast<size_t>(i)] % static_cast<int64_t>(t.n);
                if (v < 0) v += static_cast<int64_t>(t.n);
                m[static_cast<size_t>(i)] = v;
            }
            ++t.counts[key_of(m, t.n)];
        }
    });

    for (size_t ti = 0; ti < tables.size(); ++ti) {
        int64_t N = moduli[ti];
        auto elements = group_elements_mod(N);
        uint64_t index = elements.size();
        rep.index_of[N] = index;
        double max_err = 0;
        for (const auto& m : elements) {
            UniformityRow row;
            row.modulus = N;
            row.coset = m;
            auto it = tables[ti].counts.find(key_of(m, tables[ti].n));
            row.count = it == tables[ti].counts.end() ? 0 : it->second;
            row.normalized_error = std::fabs(
                static_cast<double>(row.count) * static_cast<double>(index) * covol / vol - 1.0);
            max_err = std::max(max_err, row.normalized_error);
            rep.rows.push_back(row);
        }
        rep.max_error_of[N] = max_err;
    }

    double lo = 1e300, hi = 0;
    for (const auto& [N, e] : rep.max_error_of) {
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    rep.spread = rep.max_error_of.empty() ? 0 : hi - lo;
    return rep;
}

namespace {

// Haar sampling of O_eps in exponential coordinates: X uniform in a covering
// Lie-algebra ball, weighted by the exact pullback density (sinh(mu)/mu)^2,
// mu^2 = x^2 + yz (or the sin form for elliptic directions), and restricted
// to ||exp(X) - I||_F <= eps.  O_eps is contained in the image of the Lie
// ball of radius (pi/2) eps because ||k_theta - I|| = 2 sqrt2 |sin(theta/2)|.
struct OEpsSampler {
    double eps, chi;
    explicit OEpsSampler(double eps_) : eps(eps_), chi(0.5 * kPi * eps_ * 1.0001) {}

    // returns weight (0 if outside O_eps) and the sampled u
    double draw(uint64_t seed, uint64_t index, Mat2& u) const {
        double gx = rng_gauss(seed, 51, 3 * index);
        double gy = rng_gauss(seed, 52, 3 * index);
        double gz = rng_gauss(seed, 53, 3 * index);
        double nrm = std::sqrt(gx * gx + gy * gy + gz * gz);
        if (nrm < 1e-300) return 0;
        double rad = chi * std::cbrt(rng_unit_open(seed, 54, index));
        // Euclidean ball in coordinates (sqrt2 x, y, z) so the reference
        // measure is a constant multiple of Lebesgue on the Lie algebra.
        double x = rad * gx / nrm / std::sqrt(2.0);
        double y = rad * gy / nrm;
        double z = rad * gz / nrm;
        u = sl2_exp(x, y, z);
        Mat2 d = {u.a - 1, u.b, u.c, u.d - 1};
        if (d.frobenius_sq() > eps * eps) return 0;
        double mu2 = x * x + y * z;
        if (mu2 > 1e-24) {
            double mu = std::sqrt(mu2);
            double r = std::sinh(mu) / mu;
            return r * r;
        }
        if (mu2 < -1e-24) {
            double m = std::sqrt(-mu2);
            double r = std::sin(m) / m;
            return r * r;
        }
        return 1.0;
    }
};

}  // namespace

SandwichResult sandwich_probe(int64_t R, double eps, uint64_t samples, uint64_t seed) {
    if (!(eps > 0 && eps < 0.5)) throw std::invalid_argument("sandwich_probe: eps must be in (0, 0.5)");
    if (R < 2) throw std::invalid_argument("sandwich_probe: R must be >= 2");
    if (samples < 3200) throw InsufficientSamples("sandwich_probe: needs at least 3200 samples");

    SandwichResult out;
    out.count = norm_ball_count(R);
    double T = std::sqrt(static_cast<double>(R));
    double grow = (1.0 + eps) * (1.0 + eps);

    // Cumulative counts N(F) = |{gamma : ||gamma||^2 <= F}| up to the largest
    // candidate norm; one list pass.
    double t_up = T * grow * (1.0 + eps);
    int64_t r_cand = static_cast<int64_t>(std::floor(t_up * t_up)) + 2;
    std::vector<uint64_t> cum(static_cast<size_t>(r_cand) + 1, 0);
    norm_ball_list(r_cand, [&](const IntMat& g) { ++cum[static_cast<size_t>(frobenius_sq(g))]; });
    for (size_t f = 1; f < cum.size(); ++f) cum[f] += cum[f - 1];

    // integral(Ttil) = sum over gamma of P_u(||gamma u|| <= Ttil).  By the
    // rotation invariances ||gamma u|| = ||a_{s(gamma)} u'|| with u' again
    // Haar on O_eps, so per u the admissible radial coordinates form the
    // interval e^s in [x1, x2] solving p x^2 - Ttil^2 x + q <= 0 (p, q the
    // squared row norms of u), and the sum collapses to a cumulative-count
    // lookup: E_u[ N(F_hi(u)) - N(F_lo(u) - 1) ] with F = 2 cosh s.
    OEpsSampler sampler(eps);
    const int batches = 32;
    uint64_t per_batch = std::max<uint64_t>(samples / batches, 1);

    auto cum_at = [&](int64_t f) {
        f = std::clamp<int64_t>(f, -1, r_cand);
        return f < 0 ? 0.0 : static_cast<double>(cum[static_cast<size_t>(f)]);
    };

    auto side = [&](double t_til, uint64_t stream_shift, double& mean, double& sigma) {
        double t2 = t_til * t_til;
        std::vector<double> est(batches, 0.0);
        for (int b = 0; b < batches; ++b) {
            double num = 0, den = 0;
            for (uint64_t i = 0; i < per_batch; ++i) {
                uint64_t idx = stream_shift + static_cast<uint64_t>(b) * per_batch + i;
                Mat2 u;
                double w = sampler.draw(seed, idx, u);
                if (w <= 0) continue;
                den += w;
                double p = u.a * u.a + u.b * u.b;
                double q = u.c * u.c + u.d * u.d;
                double disc = t2 * t2 - 4.0 * p * q;
                if (disc <= 0) continue;  // Ttil below the reach of this u
                double x1 = (t2 - std::sqrt(disc)) / (2.0 * p);
                double x2 = (t2 + std::sqrt(disc)) / (2.0 * p);
                if (x2 < 1.0) continue;   // interval entirely at s < 0
                double f_hi = x2 + 1.0 / x2;
                double f_lo = x1 > 1.0 ? x1 + 1.0 / x1 : 0.0;
                num += w * (cum_at(static_cast<int64_t>(std::floor(f_hi + 1e-9))) -
                            cum_at(static_cast<int64_t>(std::ceil(f_lo - 1e-9)) - 1));
            }
            if (den <= 0)
                throw InsufficientSamples("sandwich_probe: a batch drew no admissible samples");
            est[static_cast<size_t>(b)] = num / den;
        }
        mean = std::accumulate(est.begin(), est.end(), 0.0) / batches;
        double var = 0;
        for (double x : est) var += (x - mean) * (x - mean);
        sigma = std::sqrt(var / ((batches - 1.0) * batches));
    };

    side(T / grow, 0, out.lower, out.sigma_lower);
    side(T * grow, uint64_t{1} << 40, out.upper, out.sigma_upper);
    return out;
}

double phi_eps(const Mat2& h, double eps) {
    if (!(eps > 0 && eps < 0.5)) throw std::invalid_argument("phi_eps: eps must be in (0, 0.5)");
    // h gamma in O_eps forces ||gamma|| <= ||h^-1||_op (sqrt2 + eps)
    Mat2 hinv = h.inverse();
    double F = hinv.frobenius_sq();
    double opn = std::sqrt(0.5 * (F + std::sqrt(std::max(0.0, F * F - 4.0))));
    double lim = opn * (std::sqrt(2.0) + eps);
    int64_t r_cand = std::max<int64_t>(2, static_cast<int64_t>(std::floor(lim * lim)) + 1);
    uint64_t hits = 0;
    norm_ball_list(r_cand, [&](const IntMat& g) {
        Mat2 hg = h * Mat2::from(g);
        Mat2 d = {hg.a - 1, hg.b, hg.c, hg.d - 1};
        if (d.frobenius_sq() <= eps * eps) ++hits;
    });
    return static_cast<double>(hits) / haar::neighborhood_volume(eps);
}

void write_csv_preamble(std::ostream& os, const OutputMeta& meta) {
    os << "# version=" << meta.version << "\n";
    os << "# config_hash=" << meta.config_hash << "\n";
    os << "# normalization=" << meta.normalization << "\n";
    os << "# seed=" << meta.seed << "\n";
    os << "param,count,singular_count,volume,covolume,relative_error\n";
}

void write_csv_row(std::ostream& os, const CountRecord& r) {
    os << fmt17(r.param) << "," << r.count << "," << r.singular_count << "," << fmt17(r.volume)
       << "," << fmt17(r.covolume) << "," << fmt17(r.relative_error) << "\n";
}

void write_csv(std::ostream& os, const OutputMeta& meta, std::span<const CountRecord> rows) {
    write_csv_preamble(os, meta);
    for (const auto& r : rows) write_csv_row(os, r);
}

void write_json(std::ostream& os, const OutputMeta& meta, std::span<const CountRecord> rows) {
    nlohmann::json j;
    j["meta"] = {{"version", meta.version},
                 {"config_hash", meta.config_hash},
                 {"normalization", meta.normalization},
                 {"seed", meta.seed}};
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows)
        j["rows"].push_back({{"param", r.param},
                             {"count", r.count},
                             {"singular_count", r.singular_count},
                             {"volume", r.volume},
                             {"covolume", r.covolume},
                             {"relative_error", r.relative_error}});
    os << j.dump(2) << "\n";
}

ParsedRecords read_csv(std::istream& is) {
    ParsedRecords out;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        std::string s = trim(line);
        if (s.empty()) continue;
        if (s[0] == '#') {
            size_t eq = s.find('=');
            if (eq != std::string::npos) {
                std::string key = trim(s.substr(1, eq - 1));
                std::string val = trim(s.substr(eq + 1));
                if (key == "version") out.meta.version = val;
                else if (key == "config_hash") out.meta.config_hash = val;
                else if (key == "normalization") out.meta.normalization = val;
                else if (key == "seed") out.meta.seed = std::stoull(val);
            }
            continue;
        }
        if (!header_seen) {
            header_seen = true;  // column header
            continue;
        }
        auto parts = split(s, ',');
        if (parts.size() != 6) throw std::invalid_argument("csv: expected 6 columns");
        CountRecord r;
        r.param = std::stod(parts[0]);
        r.count = std::stoull(parts[1]);
        r.singular_count = std::stoull(parts[2]);
        r.volume = std::stod(parts[3]);
        r.covolume = std::stod(parts[4]);
        r.relative_error = std::stod(parts[5]);
        out.rows.push_back(r);
    }
    if (!out.meta.normalization.empty() && out.meta.normalization != haar::kNormalizationId)
        throw std::invalid_argument("csv: normalization id mismatch: " + out.meta.normalization);
    return out;
}

}  // namespace latcount
