#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "mcsim/analysis.hpp"
#include "oracle.hpp"

using namespace mcsim;
namespace frozen = oracle::frozen;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const ChannelParams kTable1{10.0, 4.0, 4.0};
const LigandParams kTable1Ligand{0.1, 0.08, 1.0};

AbsorptionProfile make_profile(double p0, double p1) {
    AbsorptionProfile profile;
    profile.probabilities = {p0, p1};
    profile.max_offset = 1;
    return profile;
}

ModulationParams make_mod(int m) {
    ModulationParams mod;
    mod.molecules_per_one = m;
    return mod;
}

// mean square of a binomial count emitted with probability `prior`
double mean_square(double m, double p, double prior) {
    return prior * (m * p * (1.0 - p) + m * p * m * p);
}

} // namespace

TEST_CASE("perfectly separated symbols have zero error") {
    const AbsorptionProfile profile = make_profile(1.0, 0.0);
    const BerResult r = ber_fixed(250.0, profile, make_mod(500), NoiseParams{0.0});
    CHECK(r.p_e == 0.0);
    CHECK(r.p_e_one == 0.0);
    CHECK(r.p_e_zero == 0.0);
}

TEST_CASE("a threshold below all mass decodes everything as one") {
    const AbsorptionProfile profile = make_profile(0.8, 0.1);
    const BerResult r = ber_fixed(-kInf, profile, make_mod(500), NoiseParams{20.0});
    CHECK(r.p_e_one == 0.0);
    CHECK(r.p_e_zero == 1.0);
    CHECK(r.p_e == doctest::Approx(0.5));
}

TEST_CASE("ber combines the conditional errors with the priors") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> up(0.0, 1.0);
    std::uniform_real_distribution<double> ut(-20.0, 80.0);
    for (int i = 0; i < 300; ++i) {
        ModulationParams mod = make_mod(50);
        mod.prior_one = up(gen);
        mod.prior_zero = 1.0 - mod.prior_one;
        const AbsorptionProfile profile = make_profile(up(gen), up(gen));
        const BerResult r = ber_fixed(ut(gen), profile, mod, NoiseParams{5.0});
        CHECK(r.p_e ==
              doctest::Approx(mod.prior_zero * r.p_e_zero + mod.prior_one * r.p_e_one)
                  .epsilon(1e-12));
        CHECK(r.p_e >= 0.0);
        CHECK(r.p_e <= 1.0);
    }
}

TEST_CASE("the adjacency context controls which neighbors are averaged") {
    const AbsorptionProfile profile = make_profile(0.7, 0.25);
    const ModulationParams mod = make_mod(40);
    const NoiseParams noise{3.0};
    const double threshold = 20.0;

    // no earlier neighbor: a single pattern per symbol
    const BerResult boundary =
        ber_fixed(threshold, profile, mod, noise, IsiContext{false, false});
    CHECK(boundary.p_e_one ==
          doctest::Approx(rx_distribution(0, 1, 0, profile, mod, noise).prob_below(threshold))
              .epsilon(1e-12));
    CHECK(boundary.p_e_zero ==
          doctest::Approx(1.0 -
                          rx_distribution(0, 0, 0, profile, mod, noise).prob_below(threshold))
              .epsilon(1e-12));

    // active later neighbor: averaged over its prior alongside the earlier one
    const BerResult full = ber_fixed(threshold, profile, mod, noise, IsiContext{true, true});
    double pe1 = 0.0;
    for (Bit prev : {0, 1})
        for (Bit next : {0, 1})
            pe1 += 0.25 *
                   rx_distribution(prev, 1, next, profile, mod, noise, true).prob_below(threshold);
    CHECK(full.p_e_one == doctest::Approx(pe1).epsilon(1e-12));
}

TEST_CASE("ber matches the per-molecule enumeration oracle at M = 8") {
    const double p0 = 0.818401057523221;
    const double p1 = 0.121385985034090;
    const AbsorptionProfile profile = make_profile(p0, p1);
    const ModulationParams mod = make_mod(8);

    const std::vector<double> pmf_one_prev0 = oracle::enum_count_pmf({{8, p0}});
    const std::vector<double> pmf_one_prev1 = oracle::enum_count_pmf({{8, p0}, {8, p1}});
    const std::vector<double> pmf_zero_prev0 = oracle::enum_count_pmf({});
    const std::vector<double> pmf_zero_prev1 = oracle::enum_count_pmf({{8, p1}});

    for (double sigma : {1.0, 0.5, 3.0}) {
        const NoiseParams noise{sigma};
        for (double threshold : {4.0, 2.0, 6.5, 0.0, 11.0}) {
            const double pe1 = 0.5 * oracle::prob_below(pmf_one_prev0, sigma, threshold) +
                               0.5 * oracle::prob_below(pmf_one_prev1, sigma, threshold);
            const double pe0 = 0.5 * (1.0 - oracle::prob_below(pmf_zero_prev0, sigma, threshold)) +
                               0.5 * (1.0 - oracle::prob_below(pmf_zero_prev1, sigma, threshold));
            const BerResult r = ber_fixed(threshold, profile, mod, noise);
            CHECK(std::abs(r.p_e_one - pe1) < 1e-10);
            CHECK(std::abs(r.p_e_zero - pe0) < 1e-10);
            CHECK(std::abs(r.p_e - 0.5 * (pe0 + pe1)) < 1e-10);
        }
    }
}

TEST_CASE("conditional error rates are monotone in the threshold") {
    const AbsorptionProfile profile = build_profile(kTable1, kTable1Ligand, 10);
    const ModulationParams mod = make_mod(500);
    const BerEvaluator eval(profile, mod, NoiseParams{91.52});
    BerResult last = eval.at(0.0);
    for (int t = 1; t <= 500; ++t) {
        const BerResult r = eval.at(static_cast<double>(t));
        CHECK(r.p_e_zero <= last.p_e_zero + 1e-12);
        CHECK(r.p_e_one >= last.p_e_one - 1e-12);
        last = r;
    }
}

TEST_CASE("ber curve has a single minimum region below the midpoint") {
    const ModulationParams mod = make_mod(500);
    for (double tau : {2.0, 4.0}) {
        const ChannelParams ch{10.0, 4.0, tau};
        const AbsorptionProfile profile = build_profile(ch, kTable1Ligand, 10);
        const NoiseParams noise = noise_for_target_snr(profile, mod, 0.5, 10.0);
        const BerEvaluator eval(profile, mod, noise);

        std::vector<double> curve;
        curve.reserve(501);
        for (int t = 0; t <= 500; ++t) curve.push_back(eval.at(static_cast<double>(t)).p_e);

        bool rising = false;
        const double eps = 1e-12;
        for (std::size_t i = 1; i < curve.size(); ++i) {
            const double d = curve[i] - curve[i - 1];
            if (d > eps) rising = true;
            if (rising) CHECK(d >= -eps); // never falls again once it rose
        }
        const std::size_t argmin =
            static_cast<std::size_t>(std::min_element(curve.begin(), curve.end()) - curve.begin());
        CHECK(argmin < 250);
    }
}

TEST_CASE("threshold search returns the smallest grid point on a flat objective") {
    const AbsorptionProfile profile = make_profile(0.0, 0.0); // no signal separation
    const ThresholdOptimum opt = optimal_threshold_search(profile, make_mod(100), NoiseParams{5.0});
    CHECK(opt.threshold == 0.0);
    CHECK(opt.p_e == doctest::Approx(0.5));
}

TEST_CASE("threshold search lands inside the zero-error plateau") {
    const AbsorptionProfile profile = make_profile(1.0, 0.0);
    const ThresholdOptimum opt = optimal_threshold_search(profile, make_mod(500), NoiseParams{0.0});
    CHECK(opt.p_e == 0.0);
    CHECK(opt.threshold > 0.0);
    CHECK(opt.threshold < 500.0);
}

TEST_CASE("threshold search at the baseline channel sits below the midpoint") {
    const AbsorptionProfile profile = build_profile(kTable1, kTable1Ligand, 10);
    const ModulationParams mod = make_mod(500);
    const NoiseParams noise = noise_for_target_snr(profile, mod, 0.5, 10.0);
    const ThresholdOptimum opt = optimal_threshold_search(profile, mod, noise);
    CHECK(opt.threshold < 250.0);
    CHECK(opt.p_e <= ber_fixed(250.0, profile, mod, noise).p_e);
}

TEST_CASE("search optimum stays at or below M/2 across unscaled channels") {
    const ModulationParams mod = make_mod(500);
    const LigandParams unit{1.0, 1.0, 1.0};
    for (double d : {10.0, 1000.0}) {
        for (double r : {4.0, 8.0}) {
            for (double tau : {2.0, 4.0}) {
                const ChannelParams ch{d, r, tau};
                if (!slot_condition(ch)) continue;
                const AbsorptionProfile profile = build_profile(ch, unit, 10);
                const NoiseParams noise = noise_for_target_snr(profile, mod, 0.5, 10.0);
                const ThresholdOptimum opt = optimal_threshold_search(profile, mod, noise);
                CHECK(opt.threshold <= 250.0);
            }
        }
    }
}

TEST_CASE("closed-form threshold reduces to the midpoint at equal priors") {
    const ModulationParams mod = make_mod(500);
    CHECK(optimal_threshold_closed(50.0, 0.0, 400.0, 0.0, NoiseParams{20.0}, mod) ==
          doctest::Approx(225.0).epsilon(1e-13));
}

TEST_CASE("closed-form threshold applies the log prior correction") {
    ModulationParams mod = make_mod(500);
    mod.prior_zero = 2.0 / 3.0;
    mod.prior_one = 1.0 / 3.0;
    // means 50 and 400, sigma^2 = 350: 225 + (350/350) ln 2
    const double sigma = std::sqrt(350.0);
    CHECK(optimal_threshold_closed(50.0, 0.0, 400.0, 0.0, NoiseParams{sigma}, mod) ==
          doctest::Approx(225.0 + std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("closed-form threshold rejects equal conditional means") {
    CHECK_THROWS_AS(
        optimal_threshold_closed(100.0, 10.0, 100.0, 10.0, NoiseParams{5.0}, make_mod(500)),
        std::domain_error);
}

TEST_CASE("profile-based closed form uses the prior-weighted interference mean") {
    const AbsorptionProfile profile = build_profile(kTable1, kTable1Ligand, 5);
    const ModulationParams mod = make_mod(500);
    const NoiseParams noise{40.0};
    const double e_isi = 0.5 * 500.0 * profile.at(1);
    CHECK(optimal_threshold_closed(profile, mod, noise) ==
          doctest::Approx(optimal_threshold_closed(0.0, e_isi, 500.0 * profile.at(0), e_isi,
                                                   noise, mod))
              .epsilon(1e-13));
}

TEST_CASE("closed-form threshold beats the naive midpoint on noisy channels") {
    const ModulationParams mod = make_mod(500);
    for (double tau : {2.0, 4.0}) {
        for (double r : {4.0, 8.0}) {
            const ChannelParams ch{10.0, r, tau};
            const AbsorptionProfile profile = build_profile(ch, kTable1Ligand, 10);
            for (double gamma : {2.0, 10.0}) {
                const NoiseParams noise = noise_for_target_snr(profile, mod, 0.5, gamma);
                const double closed = optimal_threshold_closed(profile, mod, noise);
                CHECK(ber_fixed(closed, profile, mod, noise).p_e <=
                      ber_fixed(250.0, profile, mod, noise).p_e + 1e-12);
            }
        }
    }
}

TEST_CASE("mean optimal threshold at the baseline channel") {
    const ModulationParams mod = make_mod(500);
    const double value = mean_optimal_threshold(kTable1, mod, 1.0);
    CHECK(value == doctest::Approx(frozen::kMeanOptimal_Table1).epsilon(1e-12));
    CHECK(value < 250.0);
}

TEST_CASE("mean optimal threshold approaches M/2 for long slots") {
    const ChannelParams slow{10.0, 4.0, 1e9};
    CHECK(mean_optimal_threshold(slow, make_mod(500), 1.0) ==
          doctest::Approx(250.0).epsilon(1e-4));
}

TEST_CASE("mean optimal threshold stays below M/2 whenever the slot covers the peak") {
    std::mt19937_64 gen(29);
    std::uniform_real_distribution<double> ud(10.0, 1000.0);
    std::uniform_real_distribution<double> ur(1.0, 20.0);
    std::uniform_real_distribution<double> ut(1.0, 10.0);
    const ModulationParams mod = make_mod(500);
    int checked = 0;
    while (checked < 1000) {
        const ChannelParams ch{ud(gen), ur(gen), ut(gen)};
        if (!slot_condition(ch)) continue;
        ++checked;
        CHECK(mean_optimal_threshold(ch, mod, 1.0) < 250.0);
    }
}

TEST_CASE("mean optimal threshold is the midpoint of the emitting-neighbor means") {
    const ModulationParams mod = make_mod(500);
    const NoiseParams noise{17.0};
    for (const LigandParams& lig :
         {LigandParams{1.0, 1.0, 1.0}, LigandParams{0.1, 0.08, 1.0}}) {
        const AbsorptionProfile profile = build_profile(kTable1, lig, 5);
        const double mean_one = rx_distribution(1, 1, 0, profile, mod, noise).mean();
        const double mean_zero = rx_distribution(1, 0, 0, profile, mod, noise).mean();
        CHECK(mean_optimal_threshold(kTable1, mod, lig.factor()) ==
              doctest::Approx(0.5 * (mean_one + mean_zero)).epsilon(1e-9));
    }
}

TEST_CASE("slot condition") {
    CHECK(slot_condition(ChannelParams{10.0, 4.0, 4.0}));
    CHECK_FALSE(slot_condition(ChannelParams{10.0, 20.0, 1.0}));
    // exact boundary is excluded
    CHECK_FALSE(slot_condition(ChannelParams{10.0, 4.0, 16.0 / 60.0}));
}

TEST_CASE("sinr arithmetic and the floored noise power") {
    const std::vector<double> signal{3.0, 4.0};
    const std::vector<double> isi{1.0, 1.0};
    const SinrResult r = sinr(signal, isi, NoiseParams{std::sqrt(2.9)});
    CHECK(r.signal_power == doctest::Approx(12.5));
    CHECK(r.isi_power == doctest::Approx(1.0));
    CHECK(r.noise_power == 2.0); // floor(2.9)
    CHECK(r.gamma_e == doctest::Approx(12.5 / 3.0).epsilon(1e-12));
}

TEST_CASE("sinr corner cases") {
    const std::vector<double> zeros{0.0, 0.0, 0.0};
    const std::vector<double> ones{1.0, 1.0, 1.0};
    CHECK(sinr(zeros, ones, NoiseParams{1.0}).gamma_e == 0.0);

    const std::vector<double> c{2.0, 2.0};
    const std::vector<double> no_isi{0.0, 0.0};
    CHECK(sinr(c, no_isi, NoiseParams{2.0}).gamma_e == doctest::Approx(1.0)); // c^2 / sigma^2
    CHECK(sinr(c, no_isi, NoiseParams{0.0}).gamma_e == kInf);
    CHECK(sinr(no_isi, no_isi, NoiseParams{0.0}).gamma_e == 0.0);

    CHECK_THROWS_AS(sinr(std::vector<double>{}, std::vector<double>{}, NoiseParams{1.0}),
                    std::domain_error);
    CHECK_THROWS_AS(sinr(c, ones, NoiseParams{1.0}), std::invalid_argument);
}

TEST_CASE("sinr is invariant under permutations") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> uv(0.0, 400.0);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> signal(64), isi(64);
        for (auto& v : signal) v = uv(gen);
        for (auto& v : isi) v = uv(gen);
        const SinrResult base = sinr(signal, isi, NoiseParams{11.0});
        std::shuffle(signal.begin(), signal.end(), gen);
        std::shuffle(isi.begin(), isi.end(), gen);
        const SinrResult shuffled = sinr(signal, isi, NoiseParams{11.0});
        CHECK(shuffled.gamma_e == doctest::Approx(base.gamma_e).epsilon(1e-12));
    }
}

TEST_CASE("expected powers follow the binomial second moment") {
    const double p0 = 0.818401057523221;
    const double p1 = 0.121385985034090;
    const AbsorptionProfile profile = make_profile(p0, p1);
    const ModulationParams mod = make_mod(500);
    CHECK(expected_signal_power(profile, mod, 0.5) ==
          doctest::Approx(mean_square(500.0, p0, 0.5)).epsilon(1e-13));
    CHECK(expected_isi_power(profile, mod, 0.5) ==
          doctest::Approx(mean_square(500.0, p1, 0.5)).epsilon(1e-13));
}

TEST_CASE("noise inversion hits the requested ratio") {
    const double p0 = 0.818401057523221;
    const double p1 = 0.121385985034090;
    const AbsorptionProfile profile = make_profile(p0, p1);
    const ModulationParams mod = make_mod(500);
    const double p_sig = mean_square(500.0, p0, 0.5);
    const double p_isi = mean_square(500.0, p1, 0.5);

    const NoiseParams sigma10 = noise_for_target_sinr(profile, mod, 0.5, 10.0);
    CHECK(sigma10.std_dev * sigma10.std_dev ==
          doctest::Approx(p_sig / 10.0 - p_isi).epsilon(1e-12));

    // the interference-limited ratio needs no noise at all
    CHECK(noise_for_target_sinr(profile, mod, 0.5, p_sig / p_isi).std_dev == 0.0);

    // halving the target below the limit doubles the denominator
    const NoiseParams sigma5 = noise_for_target_sinr(profile, mod, 0.5, 5.0);
    CHECK(p_isi + sigma5.std_dev * sigma5.std_dev ==
          doctest::Approx(2.0 * (p_isi + sigma10.std_dev * sigma10.std_dev)).epsilon(1e-12));

    CHECK_THROWS_AS(noise_for_target_sinr(profile, mod, 0.5, 1.01 * p_sig / p_isi),
                    std::domain_error);
    CHECK_THROWS_AS(noise_for_target_sinr(profile, mod, 0.5, 0.0), std::domain_error);

    const NoiseParams snr = noise_for_target_snr(profile, mod, 0.5, 10.0);
    CHECK(snr.std_dev * snr.std_dev == doctest::Approx(p_sig / 10.0).epsilon(1e-12));
}

TEST_CASE("noise inversion round-trips through the measured ratio") {
    const AbsorptionProfile profile = build_profile(kTable1, kTable1Ligand, 10);
    const ModulationParams mod = make_mod(500);
    const double target = 10.0;
    const NoiseParams noise = noise_for_target_sinr(profile, mod, 0.5, target);

    const SlotSampler sampler(profile, mod, noise);
    Rng rng(777);
    const int n = 100000;
    std::vector<double> signal_counts, isi_counts;
    signal_counts.reserve(n);
    isi_counts.reserve(n);
    Bit prev = 0;
    for (int i = 0; i < n; ++i) {
        const Bit cur = rng.bernoulli(0.5) ? 1 : 0;
        const SlotComposition slot = sampler(prev, cur, 0, rng);
        signal_counts.push_back(slot.signal_count);
        isi_counts.push_back(slot.isi_count);
        prev = cur;
    }
    const SinrResult measured = sinr(signal_counts, isi_counts, noise);
    CHECK(measured.gamma_e == doctest::Approx(target).epsilon(0.02));

    // pure signal-to-noise target, same machinery
    const NoiseParams snr_noise = noise_for_target_snr(profile, mod, 0.5, target);
    const SinrResult snr_measured = sinr(signal_counts, isi_counts, snr_noise);
    CHECK(snr_measured.signal_power / snr_measured.noise_power ==
          doctest::Approx(target).epsilon(0.02));
}
