#pragma once

#include <span>
#include <vector>

#include "mcsim/classified.hpp"

namespace mcsim {

struct BerResult {
    double p_e = 0.0;
    double p_e_one = 0.0;  // P(decoded 0 | sent 1)
    double p_e_zero = 0.0; // P(decoded 1 | sent 0)
    double threshold_used = 0.0;
};

// Which neighbor bits exist around the slot under analysis. Defaults to the
// steady-state aligned-slot case: an earlier neighbor, no interference from
// the later one.
struct IsiContext {
    bool prev_present = true;
    bool next_active = false;
};

// Precomputes the conditional received-statistic distributions (averaged
// over neighbor bits with their priors) so BER can be evaluated cheaply at
// many thresholds.
class BerEvaluator {
public:
    BerEvaluator(const AbsorptionProfile& profile, const ModulationParams& mod,
                 const NoiseParams& noise, IsiContext ctx = {});

    BerResult at(double threshold) const;

private:
    struct Component {
        double weight = 0.0;
        RxDistribution dist;
    };
    std::vector<Component> one_;
    std::vector<Component> zero_;
    double prior_one_ = 0.5;
    double prior_zero_ = 0.5;
};

// Error probability of a fixed-threshold receiver:
// p_e = prior_zero * P(total >= N_T | 0) + prior_one * P(total < N_T | 1),
// with neighbor bits averaged over their priors.
BerResult ber_fixed(double threshold, const AbsorptionProfile& profile,
                    const ModulationParams& mod, const NoiseParams& noise, IsiContext ctx = {});

struct ThresholdOptimum {
    double threshold = 0.0;
    double p_e = 0.0;
};

// BER-minimizing threshold over [0, M]: unit-step grid scan refined by
// golden-section search to 1e-3 molecules. Ties go to the smaller threshold.
ThresholdOptimum optimal_threshold_search(const AbsorptionProfile& profile,
                                          const ModulationParams& mod, const NoiseParams& noise);

// Closed-form optimum from the conditional means of the two symbols:
// midpoint plus the Gaussian log-prior correction
// sigma^2 / (mean1 - mean0) * ln(prior_zero / prior_one).
double optimal_threshold_closed(double e_sig0, double e_isi0, double e_sig1, double e_isi1,
                                const NoiseParams& noise, const ModulationParams& mod);

// Same, with the conditional means derived from the profile (the earlier
// neighbor emits with probability prior_one).
double optimal_threshold_closed(const AbsorptionProfile& profile, const ModulationParams& mod,
                                const NoiseParams& noise);

// Mean optimal threshold M (2 G(r,2tau) - G(r,tau)) * factor / 2, i.e. the
// midpoint of the conditional mean totals when the earlier neighbor emits.
// Each absorption probability is ligand-scaled (and clamped) consistently
// with build_profile; factor 1 is the unscaled form.
double mean_optimal_threshold(const ChannelParams& ch, const ModulationParams& mod,
                              double ligand_factor = 1.0);

// Slot-length condition tau > r^2 / (6 D), strict.
bool slot_condition(const ChannelParams& ch);

struct SinrResult {
    double gamma_e = 0.0;
    double signal_power = 0.0; // mean squared signal count
    double isi_power = 0.0;    // mean squared interference count
    double noise_power = 0.0;  // floor(sigma^2)
};

// gamma_e = mean(|signal|^2) / (mean(|isi|^2) + floor(sigma^2)). A zero
// denominator yields 0 for an all-zero signal and +inf otherwise.
SinrResult sinr(std::span<const double> signal_counts, std::span<const double> isi_counts,
                const NoiseParams& noise);

// Same ratio from precomputed mean squares.
SinrResult sinr_from_moments(double signal_power, double isi_power, const NoiseParams& noise);

// Expected mean-square of the per-slot signal / earlier-neighbor
// interference counts: bit_prior * (M p (1-p) + (M p)^2).
double expected_signal_power(const AbsorptionProfile& profile, const ModulationParams& mod,
                             double bit_prior);
double expected_isi_power(const AbsorptionProfile& profile, const ModulationParams& mod,
                          double bit_prior);

// Noise level whose expected measured SINR (interference included in the
// denominator) equals target_gamma: sigma^2 = E[P_sig]/gamma - E[P_isi].
// Throws when the target exceeds the interference-limited ratio
// E[P_sig]/E[P_isi]; the message reports that bound.
NoiseParams noise_for_target_sinr(const AbsorptionProfile& profile, const ModulationParams& mod,
                                  double bit_prior, double target_gamma);

// Noise level for a pure signal-to-noise target, sigma^2 = E[P_sig]/gamma.
// This is the ratio the aligned-slot receiver measures when only the
// causally possible interference from the later bit (none) is counted.
NoiseParams noise_for_target_snr(const AbsorptionProfile& profile, const ModulationParams& mod,
                                 double bit_prior, double target_gamma);

} // namespace mcsim
