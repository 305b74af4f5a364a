#include "mcsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mcsim/stats.hpp"

namespace mcsim {

BerEvaluator::BerEvaluator(const AbsorptionProfile& profile, const ModulationParams& mod,
                           const NoiseParams& noise, IsiContext ctx)
    : prior_one_(mod.prior_one), prior_zero_(mod.prior_zero) {
    mod.validate();
    const std::vector<Bit> prevs = ctx.prev_present ? std::vector<Bit>{0, 1} : std::vector<Bit>{0};
    const std::vector<Bit> nexts = ctx.next_active ? std::vector<Bit>{0, 1} : std::vector<Bit>{0};
    for (Bit cur : {0, 1}) {
        auto& side = cur == 1 ? one_ : zero_;
        for (Bit prev : prevs) {
            for (Bit next : nexts) {
                const double weight =
                    (ctx.prev_present ? (prev == 1 ? prior_one_ : prior_zero_) : 1.0) *
                    (ctx.next_active ? (next == 1 ? prior_one_ : prior_zero_) : 1.0);
                side.push_back(
                    {weight, rx_distribution(prev, cur, next, profile, mod, noise, ctx.next_active)});
            }
        }
    }
}

BerResult BerEvaluator::at(double threshold) const {
    double below_one = 0.0;
    double below_zero = 0.0;
    for (const Component& c : one_) below_one += c.weight * c.dist.prob_below(threshold);
    for (const Component& c : zero_) below_zero += c.weight * c.dist.prob_below(threshold);
    BerResult result;
    result.threshold_used = threshold;
    result.p_e_one = below_one;        // a one decoded as zero
    result.p_e_zero = 1.0 - below_zero; // a zero decoded as one
    result.p_e = prior_zero_ * result.p_e_zero + prior_one_ * result.p_e_one;
    return result;
}

BerResult ber_fixed(double threshold, const AbsorptionProfile& profile,
                    const ModulationParams& mod, const NoiseParams& noise, IsiContext ctx) {
    return BerEvaluator(profile, mod, noise, ctx).at(threshold);
}

ThresholdOptimum optimal_threshold_search(const AbsorptionProfile& profile,
                                          const ModulationParams& mod, const NoiseParams& noise) {
    const BerEvaluator eval(profile, mod, noise);
    const int m = mod.molecules_per_one;

    double best_t = 0.0;
    double best_pe = eval.at(0.0).p_e;
    for (int t = 1; t <= m; ++t) {
        const double pe = eval.at(static_cast<double>(t)).p_e;
        if (pe < best_pe) {
            best_pe = pe;
            best_t = static_cast<double>(t);
        }
    }

    // Golden-section refinement inside the bracketing unit interval.
    double lo = std::max(0.0, best_t - 1.0);
    double hi = std::min(static_cast<double>(m), best_t + 1.0);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = eval.at(c).p_e;
    double fd = eval.at(d).p_e;
    while (hi - lo > 1e-3) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = eval.at(c).p_e;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = eval.at(d).p_e;
        }
    }
    const double refined_t = 0.5 * (lo + hi);
    const double refined_pe = eval.at(refined_t).p_e;
    if (refined_pe < best_pe || (refined_pe == best_pe && refined_t < best_t))
        return {refined_t, refined_pe};
    return {best_t, best_pe};
}

double optimal_threshold_closed(double e_sig0, double e_isi0, double e_sig1, double e_isi1,
                                const NoiseParams& noise, const ModulationParams& mod) {
    mod.validate();
    noise.validate();
    const double mean_zero = e_sig0 + e_isi0;
    const double mean_one = e_sig1 + e_isi1;
    if (mean_one == mean_zero)
        throw std::domain_error("optimal_threshold_closed: equal conditional means");
    const double variance = noise.std_dev * noise.std_dev;
    return 0.5 * (mean_zero + mean_one) +
           variance / (mean_one - mean_zero) * std::log(mod.prior_zero / mod.prior_one);
}

double optimal_threshold_closed(const AbsorptionProfile& profile, const ModulationParams& mod,
                                const NoiseParams& noise) {
    const double m = mod.molecules_per_one;
    const double e_isi = mod.prior_one * m * profile.at(1);
    return optimal_threshold_closed(0.0, e_isi, m * profile.at(0), e_isi, noise, mod);
}

double mean_optimal_threshold(const ChannelParams& ch, const ModulationParams& mod,
                              double ligand_factor) {
    ch.validate();
    mod.validate();
    const double g_tau = absorption_cdf(ch.distance, ch.slot_length, ch.diffusion_coefficient);
    const double g_2tau =
        absorption_cdf(ch.distance, 2.0 * ch.slot_length, ch.diffusion_coefficient);
    const double p_sig = ligand_scale(g_tau, ligand_factor).value;
    const double p_isi = ligand_scale(g_2tau - g_tau, ligand_factor).value;
    // Midpoint of the conditional mean totals when the earlier neighbor
    // emits: (M p_sig + 2 M p_isi) / 2; factor 1 gives M (2 G(2t) - G(t)) / 2.
    return mod.molecules_per_one * (p_sig + 2.0 * p_isi) / 2.0;
}

bool slot_condition(const ChannelParams& ch) {
    ch.validate();
    return ch.slot_length > time_to_peak(ch.distance, ch.diffusion_coefficient);
}

SinrResult sinr_from_moments(double signal_power, double isi_power, const NoiseParams& noise) {
    noise.validate();
    SinrResult result;
    result.signal_power = signal_power;
    result.isi_power = isi_power;
    result.noise_power = std::floor(noise.std_dev * noise.std_dev);
    const double denominator = result.isi_power + result.noise_power;
    if (denominator == 0.0)
        result.gamma_e =
            result.signal_power == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    else
        result.gamma_e = result.signal_power / denominator;
    return result;
}

SinrResult sinr(std::span<const double> signal_counts, std::span<const double> isi_counts,
                const NoiseParams& noise) {
    if (signal_counts.empty()) throw std::domain_error("sinr: empty input");
    if (signal_counts.size() != isi_counts.size())
        throw std::invalid_argument("sinr: sequences must have the same length");
    double signal_sq = 0.0;
    double isi_sq = 0.0;
    for (double v : signal_counts) signal_sq += v * v;
    for (double v : isi_counts) isi_sq += v * v;
    return sinr_from_moments(signal_sq / static_cast<double>(signal_counts.size()),
                             isi_sq / static_cast<double>(isi_counts.size()), noise);
}

namespace {

double mean_square_count(double m, double p, double prior) {
    // E[X^2] of Binomial(m, p) emitted with probability `prior`.
    const double mean = m * p;
    return prior * (m * p * (1.0 - p) + mean * mean);
}

} // namespace

double expected_signal_power(const AbsorptionProfile& profile, const ModulationParams& mod,
                             double bit_prior) {
    mod.validate();
    if (!(bit_prior >= 0.0 && bit_prior <= 1.0))
        throw std::domain_error("expected_signal_power: bit_prior must be in [0, 1]");
    return mean_square_count(mod.molecules_per_one, profile.at(0), bit_prior);
}

double expected_isi_power(const AbsorptionProfile& profile, const ModulationParams& mod,
                          double bit_prior) {
    mod.validate();
    if (!(bit_prior >= 0.0 && bit_prior <= 1.0))
        throw std::domain_error("expected_isi_power: bit_prior must be in [0, 1]");
    return mean_square_count(mod.molecules_per_one, profile.at(1), bit_prior);
}

NoiseParams noise_for_target_sinr(const AbsorptionProfile& profile, const ModulationParams& mod,
                                  double bit_prior, double target_gamma) {
    if (!(target_gamma > 0.0))
        throw std::domain_error("noise_for_target_sinr: target must be > 0");
    const double p_sig = expected_signal_power(profile, mod, bit_prior);
    const double p_isi = expected_isi_power(profile, mod, bit_prior);
    double variance = p_sig / target_gamma - p_isi;
    // a target of exactly p_sig/p_isi must round-trip to sigma = 0
    if (variance < 0.0 && variance > -1e-9 * std::max(1.0, p_sig / target_gamma))
        variance = 0.0;
    if (variance < 0.0) {
        throw std::domain_error(
            "noise_for_target_sinr: target " + std::to_string(target_gamma) +
            " is not achievable; interference limits the ratio to " +
            std::to_string(p_isi > 0.0 ? p_sig / p_isi : std::numeric_limits<double>::infinity()));
    }
    return NoiseParams{std::sqrt(variance)};
}

NoiseParams noise_for_target_snr(const AbsorptionProfile& profile, const ModulationParams& mod,
                                 double bit_prior, double target_gamma) {
    if (!(target_gamma > 0.0))
        throw std::domain_error("noise_for_target_snr: target must be > 0");
    const double p_sig = expected_signal_power(profile, mod, bit_prior);
    return NoiseParams{std::sqrt(p_sig / target_gamma)};
}

} // namespace mcsim
