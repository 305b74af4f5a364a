#include "mcsim/classified.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mcsim/stats.hpp"

namespace mcsim {

namespace {

void check_bit(Bit bit, const char* name) {
    if (bit != 0 && bit != 1) throw std::domain_error(std::string(name) + " must be 0 or 1");
}

} // namespace

void ModulationParams::validate() const {
    if (molecules_per_one < 1)
        throw std::domain_error("modulation.molecules_per_one must be >= 1");
    if (!(prior_one >= 0.0 && prior_one <= 1.0))
        throw std::domain_error("modulation.prior_one must be in [0, 1]");
    if (!(prior_zero >= 0.0 && prior_zero <= 1.0))
        throw std::domain_error("modulation.prior_zero must be in [0, 1]");
    if (std::abs(prior_one + prior_zero - 1.0) > 1e-12)
        throw std::domain_error("modulation priors must sum to 1");
}

void NoiseParams::validate() const {
    if (!(std_dev >= 0.0)) throw std::domain_error("noise.std_dev must be >= 0");
}

double signal_pmf(int k0, Bit bit, const ModulationParams& mod, double p_sig) {
    if (k0 < 0) throw std::domain_error("signal_pmf: k0 must be >= 0");
    check_bit(bit, "signal_pmf: bit");
    mod.validate();
    if (!(p_sig >= 0.0 && p_sig <= 1.0))
        throw std::domain_error("signal_pmf: p_sig must be in [0, 1]");
    if (bit == 0) return k0 == 0 ? 1.0 : 0.0;
    return binomial_pmf_at(mod.molecules_per_one, k0, p_sig);
}

double isi_pmf(int k1, Bit prev_bit, Bit next_bit, const ModulationParams& mod,
               double p_prev, double p_next, bool next_active) {
    if (k1 < 0) throw std::domain_error("isi_pmf: k1 must be >= 0");
    check_bit(prev_bit, "isi_pmf: prev_bit");
    check_bit(next_bit, "isi_pmf: next_bit");
    mod.validate();
    if (!(p_prev >= 0.0 && p_prev <= 1.0) || !(p_next >= 0.0 && p_next <= 1.0))
        throw std::domain_error("isi_pmf: probabilities must be in [0, 1]");

    const int m = mod.molecules_per_one;
    const bool prev_emits = prev_bit == 1;
    const bool next_emits = next_active && next_bit == 1;
    if (!prev_emits && !next_emits) return k1 == 0 ? 1.0 : 0.0;
    if (prev_emits && !next_emits) return binomial_pmf_at(m, k1, p_prev);
    if (!prev_emits) return binomial_pmf_at(m, k1, p_next);
    double acc = 0.0;
    for (int h = std::max(0, k1 - m); h <= std::min(k1, m); ++h)
        acc += binomial_pmf_at(m, h, p_prev) * binomial_pmf_at(m, k1 - h, p_next);
    return acc;
}

double noise_density(double k2, const NoiseParams& noise) {
    if (!(noise.std_dev > 0.0))
        throw std::domain_error("noise_density: sigma must be > 0");
    const double sigma = noise.std_dev;
    return std::exp(-k2 * k2 / (2.0 * sigma * sigma)) / (std::sqrt(2.0 * M_PI) * sigma);
}

double RxDistribution::prob_below(double x) const {
    double acc = 0.0;
    if (sigma == 0.0) {
        for (std::size_t k = 0; k < pmf.size(); ++k)
            if (static_cast<double>(k) < x) acc += pmf[k];
        return acc;
    }
    for (std::size_t k = 0; k < pmf.size(); ++k)
        acc += pmf[k] * normal_cdf((x - static_cast<double>(k)) / sigma);
    return std::clamp(acc, 0.0, 1.0);
}

double RxDistribution::mean() const {
    double acc = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) acc += static_cast<double>(k) * pmf[k];
    return acc; // noise is zero-mean
}

RxDistribution rx_distribution(Bit prev_bit, Bit cur_bit, Bit next_bit,
                               const AbsorptionProfile& profile, const ModulationParams& mod,
                               const NoiseParams& noise, bool next_active) {
    check_bit(prev_bit, "rx_distribution: prev_bit");
    check_bit(cur_bit, "rx_distribution: cur_bit");
    check_bit(next_bit, "rx_distribution: next_bit");
    mod.validate();
    noise.validate();
    if (profile.max_offset < 1)
        throw std::invalid_argument("rx_distribution: profile must cover offsets 0 and 1");

    const int m = mod.molecules_per_one;
    std::vector<double> counts{1.0}; // point mass at zero molecules
    const auto fold = [&](Bit bit, double p) {
        if (bit == 1) counts = convolve(counts, binomial_pmf(m, p));
    };
    fold(cur_bit, profile.at(0));
    fold(prev_bit, profile.at(1));
    if (next_active) fold(next_bit, profile.at(0));
    return RxDistribution{std::move(counts), noise.std_dev};
}

SlotSampler::SlotSampler(const AbsorptionProfile& profile, const ModulationParams& mod,
                         const NoiseParams& noise, bool next_active)
    : signal_(mod.molecules_per_one, profile.at(0)),
      prev_isi_(mod.molecules_per_one, profile.at(1)),
      next_isi_(mod.molecules_per_one, profile.at(0)),
      sigma_(noise.std_dev),
      next_active_(next_active) {
    mod.validate();
    noise.validate();
    if (profile.max_offset < 1)
        throw std::invalid_argument("SlotSampler: profile must cover offsets 0 and 1");
}

SlotComposition SlotSampler::operator()(Bit prev_bit, Bit cur_bit, Bit next_bit, Rng& rng) const {
    check_bit(prev_bit, "SlotSampler: prev_bit");
    check_bit(cur_bit, "SlotSampler: cur_bit");
    check_bit(next_bit, "SlotSampler: next_bit");
    SlotComposition slot;
    if (cur_bit == 1) slot.signal_count = signal_(rng);
    if (prev_bit == 1) slot.isi_count += prev_isi_(rng);
    if (next_active_ && next_bit == 1) slot.isi_count += next_isi_(rng);
    slot.noise_value = rng.normal(sigma_);
    return slot;
}

SlotComposition sample_slot(Bit prev_bit, Bit cur_bit, Bit next_bit,
                            const AbsorptionProfile& profile, const ModulationParams& mod,
                            const NoiseParams& noise, bool next_active, Rng& rng) {
    return SlotSampler(profile, mod, noise, next_active)(prev_bit, cur_bit, next_bit, rng);
}

} // namespace mcsim
