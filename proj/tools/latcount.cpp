// latcount: exact lattice-point counts in SL2(Z)/SL3(Z) norm balls,
// hyperbolic balls, sectors and bisectors, Haar volumes, congruence
// uniformity tables, the comparison-lemma sandwich probe, well-roundedness
// probing, predicted-rate calculators and the adelic spherical-function
// partial products.  Deterministic given --seed; CSV or JSON output.
//
// Exit codes: 0 success, 1 usage/config error, 2 numerical failure,
// 3 assertion failure in --check mode.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "latcount/enumerate.hpp"
#include "latcount/experiment.hpp"
#include "latcount/haar.hpp"
#include "latcount/rates.hpp"

using namespace latcount;

namespace {

struct Common {
    std::string config_path;
    ExperimentConfig cfg;

    std::unique_ptr<std::ofstream> file;
    std::ostream* stream = &std::cout;

    void open_out() {
        if (!cfg.out.empty()) {
            file = std::make_unique<std::ofstream>(cfg.out);
            if (!*file) throw std::invalid_argument("cannot open output file: " + cfg.out);
            stream = file.get();
        }
    }

    OutputMeta meta() const {
        OutputMeta m;
        m.config_hash = cfg.config_hash();
        m.normalization = haar::kNormalizationId;
        m.seed = cfg.seed;
        return m;
    }
};

void add_common(CLI::App* sub, Common& c) {
    sub->fallthrough();  // lets the global --check appear after the subcommand
    // The config file (preloaded before parsing) is the base; explicit
    // command-line options override it.
    sub->add_option("--config", c.config_path, "flat key = value config file");
    sub->add_option("--seed", c.cfg.seed, "RNG seed (default 0)");
    sub->add_option("--workers", c.cfg.workers, "worker threads (default 1)");
    sub->add_option("--out", c.cfg.out, "output path (default stdout)");
    sub->add_option("--format", c.cfg.format, "csv | json (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--eta", c.cfg.eta, "exponent slack (default 0.02)");
    sub->add_flag("--sharp-spectrum", c.cfg.sharp_spectrum,
                  "use the kappa = 1/p improvement for bi-K-invariant heights");
}

void emit_rows(Common& c, std::span<const CountRecord> rows) {
    if (c.cfg.format == "json")
        write_json(*c.stream, c.meta(), rows);
    else
        write_csv(*c.stream, c.meta(), rows);
}

int check_or_ok(bool check_mode, bool ok, const std::string& what) {
    if (!check_mode || ok) return 0;
    std::cerr << "check failed: " << what << "\n";
    return 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice point counting experiments for SL2(Z) and SL3(Z)"};
    app.require_subcommand(1);

    bool check_mode = false;
    app.add_flag("--check", check_mode, "exit 3 when the subcommand's assertion fails");

    // Preload any --config file so command-line options parsed below override
    // it regardless of flag order.
    ExperimentConfig base;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                base = load_config_file(argv[i + 1]);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 1;
            }
        }
    }

    // ---- count
    Common c_count;
    c_count.cfg = base;
    double count_R = 0;
    auto* sc_count = app.add_subcommand("count", "count lattice points in one domain");
    add_common(sc_count, c_count);
    sc_count->add_option("--domain", c_count.cfg.domain,
                         "norm-ball | hyperbolic-ball | sector | bisector");
    sc_count->add_option("--param", c_count.cfg.radius, "T (norm-ball) or t (otherwise)");
    sc_count->add_option("--R", count_R, "Frobenius bound; overrides --param for norm balls");
    sc_count->add_option("--delta", c_count.cfg.delta, "regularity cutoff (default 1e-9)");
    sc_count->add_option("--modulus", c_count.cfg.modulus, "congruence modulus N (default 1)");
    sc_count->add_option("--coset", c_count.cfg.coset, "coset representative, 4 integers");
    sc_count->add_option("--arc1-lo", c_count.cfg.arc1_lo, "bisector k1 arc start");
    sc_count->add_option("--arc1-hi", c_count.cfg.arc1_hi, "bisector k1 arc end");
    sc_count->add_option("--arc2-lo", c_count.cfg.arc2_lo, "sector/bisector k2 arc start");
    sc_count->add_option("--arc2-hi", c_count.cfg.arc2_hi, "sector/bisector k2 arc end");

    // ---- sweep
    Common c_sweep;
    c_sweep.cfg = base;
    std::string sweep_grid;
    double sweep_target = -1;
    auto* sc_sweep = app.add_subcommand("sweep", "count-vs-volume sweep over a parameter grid");
    add_common(sc_sweep, c_sweep);
    sc_sweep->add_option("--domain", c_sweep.cfg.domain, "domain kind");
    sc_sweep->add_option("--grid", sweep_grid, "lo:hi:step or comma list");
    sc_sweep->add_option("--modulus", c_sweep.cfg.modulus, "congruence modulus N");
    sc_sweep->add_option("--coset", c_sweep.cfg.coset, "coset representative");
    sc_sweep->add_option("--delta", c_sweep.cfg.delta, "regularity cutoff");
    sc_sweep->add_option("--target-exponent", sweep_target,
                         "fit target for --check (default 1/6)");

    // ---- sectors
    Common c_sec;
    c_sec.cfg = base;
    double sec_t = 9.0;
    auto* sc_sec = app.add_subcommand("sectors", "k2-angle equidistribution histogram");
    add_common(sc_sec, c_sec);
    sc_sec->add_option("--t", sec_t, "hyperbolic radius (default 9)");
    sc_sec->add_option("--bins", c_sec.cfg.bins2, "number of k2 bins (default 8)");
    sc_sec->add_option("--modulus", c_sec.cfg.modulus, "congruence modulus N");
    sc_sec->add_option("--coset", c_sec.cfg.coset, "coset representative");
    sc_sec->add_option("--delta", c_sec.cfg.delta, "regularity cutoff");

    // ---- bisectors
    Common c_bis;
    c_bis.cfg = base;
    double bis_t = 9.0;
    auto* sc_bis = app.add_subcommand("bisectors", "(k1, k2) histogram and product residual");
    add_common(sc_bis, c_bis);
    sc_bis->add_option("--t", bis_t, "hyperbolic radius (default 9)");
    sc_bis->add_option("--bins1", c_bis.cfg.bins1, "k1 bins (default 4)");
    sc_bis->add_option("--bins2", c_bis.cfg.bins2, "k2 bins (default 8)");
    sc_bis->add_option("--delta", c_bis.cfg.delta, "regularity cutoff");

    // ---- congruence
    Common c_cong;
    c_cong.cfg = base;
    double cong_R = 400000;
    auto* sc_cong = app.add_subcommand("congruence", "uniformity over Gamma(N) cosets");
    add_common(sc_cong, c_cong);
    sc_cong->add_option("--R", cong_R, "Frobenius bound (default 4e5)");
    sc_cong->add_option("--moduli", c_cong.cfg.moduli, "list of N (default 2 3 4 5)");

    // ---- volume
    Common c_vol;
    c_vol.cfg = base;
    auto* sc_vol = app.add_subcommand("volume", "Haar volume of a domain");
    add_common(sc_vol, c_vol);
    sc_vol->add_option("--domain", c_vol.cfg.domain, "domain kind");
    sc_vol->add_option("--param", c_vol.cfg.radius, "T or t")->required();
    sc_vol->add_option("--arc1-lo", c_vol.cfg.arc1_lo, "");
    sc_vol->add_option("--arc1-hi", c_vol.cfg.arc1_hi, "");
    sc_vol->add_option("--arc2-lo", c_vol.cfg.arc2_lo, "");
    sc_vol->add_option("--arc2-hi", c_vol.cfg.arc2_hi, "");

    // ---- exponent
    Common c_exp;
    c_exp.cfg = base;
    double exp_p = 2.0, exp_r = 0.0, exp_alpha0 = 0.0, exp_alpha = 1.0;
    int exp_m = 2;
    auto* sc_exp = app.add_subcommand("exponent", "predicted constants and exponents");
    add_common(sc_exp, c_exp);
    sc_exp->add_option("--p", exp_p, "integrability exponent (default 2, tempered)");
    sc_exp->add_option("--m", exp_m, "SL_m / hyperbolic dimension (default 2)");
    sc_exp->add_option("--r", exp_r, "relative factor growth for metric balls (default 0)");
    sc_exp->add_option("--alpha0", exp_alpha0, "singular growth exponent (default 0)");
    sc_exp->add_option("--alpha", exp_alpha, "volume growth exponent (default 1)");

    // ---- probe-roundedness
    Common c_wr;
    c_wr.cfg = base;
    double wr_T = 50.0;
    std::vector<double> wr_grid{0.08, 0.04, 0.02, 0.01};
    int wr_pairs = 32;
    auto* sc_wr = app.add_subcommand("probe-roundedness", "Monte Carlo Holder exponent probe");
    add_common(sc_wr, c_wr);
    sc_wr->add_option("--T", wr_T, "norm-ball radius (default 50)");
    sc_wr->add_option("--eps-grid", wr_grid, "eps values (default 0.08 0.04 0.02 0.01)");
    sc_wr->add_option("--samples", c_wr.cfg.samples, "shell samples (default 1e6)");
    sc_wr->add_option("--uv-pairs", wr_pairs, "perturbation pairs per point (default 32)");

    // ---- sandwich
    Common c_sw;
    c_sw.cfg = base;
    double sw_R = 1000;
    auto* sc_sw = app.add_subcommand("sandwich", "comparison-lemma bracket of the exact count");
    add_common(sc_sw, c_sw);
    sc_sw->add_option("--R", sw_R, "Frobenius bound (default 1000)");
    sc_sw->add_option("--eps", c_sw.cfg.eps, "neighbourhood radius (default 0.05)");
    sc_sw->add_option("--samples", c_sw.cfg.samples, "Monte Carlo samples (default 1e6)");

    // ---- adelic-hc
    Common c_ad;
    c_ad.cfg = base;
    auto* sc_ad = app.add_subcommand("adelic-hc", "spherical-function partial products over primes");
    add_common(sc_ad, c_ad);
    sc_ad->add_option("--p-exp", c_ad.cfg.p_exp, "integrability exponent (default 4.5)");
    sc_ad->add_option("--prime-bound", c_ad.cfg.prime_bound, "largest prime (default 1e5)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sc_count->parsed()) {
            c_count.open_out();
            if (count_R > 0) c_count.cfg.radius = std::sqrt(count_R);
            EnumerationTask task;
            task.domain = domain_from_config(c_count.cfg, c_count.cfg.radius);
            if (c_count.cfg.modulus > 1)
                task.congruence =
                    CongruenceSpec(c_count.cfg.modulus, std::span<const int64_t>(c_count.cfg.coset));
            task.mode = (task.congruence || task.domain.has_arc1() || task.domain.has_arc2())
                            ? EnumerationMode::List
                            : EnumerationMode::CountOnly;
            task.workers = c_count.cfg.workers;
            auto res = enumerate_domain(task);
            CountRecord rows[] = {res.record};
            emit_rows(c_count, rows);
            // group elements vs orbit points: the stabilizer {+-I} acts
            // trivially on the hyperbolic plane
            *c_count.stream << "# orbit_count=" << res.record.count / 2 << "\n";
            return 0;
        }

        if (sc_sweep->parsed()) {
            c_sweep.open_out();
            if (sc_sweep->count("--grid") > 0)
                c_sweep.cfg =
                    parse_config_text(c_sweep.cfg.canonical_text() + "grid = " + sweep_grid + "\n");
            std::vector<CountRecord> rows;
            if (c_sweep.cfg.format == "json") {
                rows = sweep(c_sweep.cfg);
                emit_rows(c_sweep, rows);
            } else {
                // stream and flush row by row so an aborted run keeps the
                // completed prefix
                auto& os = *c_sweep.stream;
                write_csv_preamble(os, c_sweep.meta());
                int pre_asymptotic = 0;
                sweep_stream(c_sweep.cfg, [&](const CountRecord& r) {
                    rows.push_back(r);
                    if (r.param < c_sweep.cfg.t0) ++pre_asymptotic;
                    write_csv_row(os, r);
                    os.flush();
                });
                if (pre_asymptotic > 0)
                    os << "# pre_asymptotic_rows=" << pre_asymptotic
                       << " (param below t0 = " << c_sweep.cfg.t0 << ")\n";
            }
            if (check_mode && !rows.empty()) {
                double target = sweep_target > 0 ? sweep_target : 1.0 / 6.0;
                auto fit = fit_exponent(rows, target - c_sweep.cfg.eta);
                return check_or_ok(true, fit.pass, "exponent-fit stability verdict");
            }
            return 0;
        }

        if (sc_sec->parsed()) {
            c_sec.open_out();
            std::optional<CongruenceSpec> cong;
            if (c_sec.cfg.modulus > 1)
                cong = CongruenceSpec(c_sec.cfg.modulus, std::span<const int64_t>(c_sec.cfg.coset));
            auto rep = angular_report(sec_t, 1, c_sec.cfg.bins2, cong, c_sec.cfg.delta);
            auto& os = *c_sec.stream;
            os << "# normalization=" << haar::kNormalizationId << "\n";
            os << "bin,count,fraction\n";
            for (int j = 0; j < rep.bins2; ++j)
                os << j << "," << rep.col(j) << ","
                   << static_cast<double>(rep.col(j)) / static_cast<double>(rep.total) << "\n";
            os << "# total=" << rep.total << " singular=" << rep.singular
               << " discrepancy=" << rep.discrepancy << "\n";
            return check_or_ok(check_mode, rep.discrepancy <= 0.03, "sector discrepancy <= 0.03");
        }

        if (sc_bis->parsed()) {
            c_bis.open_out();
            auto rep = angular_report(bis_t, c_bis.cfg.bins1, c_bis.cfg.bins2, std::nullopt,
                                      c_bis.cfg.delta);
            auto& os = *c_bis.stream;
            os << "# normalization=" << haar::kNormalizationId << "\n";
            os << "bin1,bin2,count\n";
            for (int i = 0; i < rep.bins1; ++i)
                for (int j = 0; j < rep.bins2; ++j)
                    os << i << "," << j << ","
                       << rep.cells[static_cast<size_t>(i) * rep.bins2 + j] << "\n";
            os << "# total=" << rep.total << " singular=" << rep.singular
               << " product_residual=" << rep.product_residual << "\n";
            return check_or_ok(check_mode, rep.product_residual <= 0.05,
                               "bisector product residual <= 0.05");
        }

        if (sc_cong->parsed()) {
            c_cong.open_out();
            auto rep = uniformity_report(c_cong.cfg.moduli, static_cast<int64_t>(cong_R));
            auto& os = *c_cong.stream;
            os << "# normalization=" << haar::kNormalizationId << "\n";
            os << "N,coset,count,normalized_error\n";
            for (const auto& row : rep.rows)
                os << row.modulus << "," << row.coset[0] << ";" << row.coset[1] << ";"
                   << row.coset[2] << ";" << row.coset[3] << "," << row.count << ","
                   << row.normalized_error << "\n";
            double worst = 0;
            for (const auto& [N, e] : rep.max_error_of) {
                os << "# N=" << N << " index=" << rep.index_of[N] << " max_error=" << e << "\n";
                worst = std::max(worst, e);
            }
            os << "# spread=" << rep.spread << "\n";
            return check_or_ok(check_mode, worst <= 0.05 && rep.spread <= 0.03,
                               "congruence uniformity");
        }

        if (sc_vol->parsed()) {
            c_vol.open_out();
            DomainSpec d = domain_from_config(c_vol.cfg, c_vol.cfg.radius);
            *c_vol.stream << "volume," << haar::volume(d) << "\n"
                          << "covolume," << haar::sl2z_covolume() << "\n"
                          << "normalization," << haar::kNormalizationId << "\n";
            return 0;
        }

        if (sc_exp->parsed()) {
            c_exp.open_out();
            auto& os = *c_exp.stream;
            auto sp = rates::SpectralProfile::from_p(exp_p, c_exp.cfg.sharp_spectrum);
            auto bik = rates::GroupProfile::sl2z(true);   // rho = dim K\G = 2
            auto full = rates::GroupProfile::sl2z(false); // rho = dim G = 3
            // lower density constant measured from the group neighborhoods,
            // consistent with the full-dimension profile
            double m0 = haar::neighborhood_volume(0.05) / std::pow(0.05, full.rho);
            os << "quantity,value\n";
            os << "n_e," << sp.ne << "\n";
            os << "kappa," << sp.kappa << "\n";
            os << "counting_exponent_biK,"
               << rates::counting_exponent(sp.kappa, bik.a, bik.rho) << "\n";
            os << "counting_exponent_fulldim,"
               << rates::counting_exponent(sp.kappa, full.a, full.rho) << "\n";
            os << "error_constant_A_fulldim,"
               << rates::error_constant_A(m0, full.rho, full.a, full.c,
                                          haar::neighborhood_volume(full.eps0))
               << "\n";
            os << "slm_exponent(m=" << exp_m << ")," << rates::slm_profile(exp_m).exponent << "\n";
            auto sec = rates::hyperbolic_sector_rate(exp_m, exp_p, 1.0);
            os << "sector_error_exponent," << sec.error_exponent << "\n";
            os << "sector_relative_exponent," << sec.relative_exponent << "\n";
            os << "metric_ball_exponent,"
               << rates::metric_ball_exponent(exp_p, exp_m * (exp_m + 1) / 2.0 - 1.0, exp_r) << "\n";
            os << "adelic_height_exponent," << rates::adelic_height_exponent(exp_p, 1.0, 3.0) << "\n";
            os << "congruence_theta," << rates::congruence_theta(exp_p, 2.0) << "\n";
            os << "bisector_zeta," << rates::bisector_zeta(exp_p, 3.0, exp_alpha0, exp_alpha)
               << "\n";
            os << "affine_zeta," << rates::affine_zeta(exp_p, 3.0) << "\n";
            return 0;
        }

        if (sc_wr->parsed()) {
            c_wr.open_out();
            auto rep = haar::well_roundedness_probe(DomainSpec::norm_ball(wr_T), wr_grid,
                                                    c_wr.cfg.seed, c_wr.cfg.samples, wr_pairs);
            auto& os = *c_wr.stream;
            os << "eps,ratio,rel_se\n";
            for (size_t i = 0; i < rep.eps.size(); ++i)
                os << rep.eps[i] << "," << rep.ratio[i] << "," << rep.rel_se[i] << "\n";
            os << "# fitted_a=" << rep.fitted_a << "\n";
            return check_or_ok(check_mode, rep.fitted_a >= 0.9, "Holder exponent >= 0.9");
        }

        if (sc_sw->parsed()) {
            c_sw.open_out();
            auto res = sandwich_probe(static_cast<int64_t>(sw_R), c_sw.cfg.eps, c_sw.cfg.samples,
                                      c_sw.cfg.seed);
            *c_sw.stream << "lower,count,upper,sigma_lower,sigma_upper\n"
                         << res.lower << "," << res.count << "," << res.upper << ","
                         << res.sigma_lower << "," << res.sigma_upper << "\n";
            return check_or_ok(check_mode, res.holds(), "sandwich bracket at 3 sigma");
        }

        if (sc_ad->parsed()) {
            c_ad.open_out();
            auto rep = rates::adelic_hc_partial_product(c_ad.cfg.p_exp, c_ad.cfg.prime_bound);
            auto& os = *c_ad.stream;
            os << "prime,log_partial_product\n";
            for (size_t i = 0; i < rep.primes.size(); ++i)
                os << rep.primes[i] << "," << rep.log_partial_products[i] << "\n";
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
