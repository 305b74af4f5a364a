#pragma once

#include <vector>

#include "mcsim/channel.hpp"
#include "mcsim/rng.hpp"

namespace mcsim {

using Bit = int;
using BitSequence = std::vector<Bit>;

struct ModulationParams {
    int molecules_per_one = 500; // M, emitted for a one
    double prior_one = 0.5;
    double prior_zero = 0.5;

    void validate() const;
};

struct NoiseParams {
    double std_dev = 0.0; // sigma, molecules

    void validate() const;
};

// One received slot split into its three molecule sources. noise_value may
// be negative (molecules lost to other receivers), so total() is real.
struct SlotComposition {
    int signal_count = 0;
    int isi_count = 0;
    double noise_value = 0.0;

    double total() const { return signal_count + isi_count + noise_value; }
};

// P(signal count = k0 | transmitted bit). Binomial(M, p_sig) for a one, a
// point mass at zero for a zero.
double signal_pmf(int k0, Bit bit, const ModulationParams& mod, double p_sig);

// PMF of the summed adjacent-bit interference at k1: the convolution of one
// term per neighbor, each Binomial(M, p) when that neighbor emitted and a
// point mass at zero otherwise. The later neighbor only contributes when
// next_active, i.e. when the receive slot strictly trails the transmit slot
// so its molecules can already be in flight.
double isi_pmf(int k1, Bit prev_bit, Bit next_bit, const ModulationParams& mod,
               double p_prev, double p_next, bool next_active);

// Zero-mean Gaussian density of the counting noise. sigma must be > 0; the
// degenerate sigma = 0 case is a point mass handled by callers.
double noise_density(double k2, const NoiseParams& noise);

// Distribution of the received statistic: exact discrete PMF of the
// signal + ISI molecule count, plus Gaussian noise of width sigma.
struct RxDistribution {
    std::vector<double> pmf; // counts 0..pmf.size()-1
    double sigma = 0.0;

    // P(total < x). With sigma > 0 this is the continuous CDF
    // sum_k pmf[k] Phi((x-k)/sigma); with sigma = 0 point masses at
    // k >= x are excluded, matching the ties-decode-to-one rule.
    double prob_below(double x) const;

    double mean() const;
};

// Builds the received-statistic distribution for one adjacent-bit pattern.
// Signal molecules use profile[0] and the earlier neighbor profile[1]
// (transmit and receive slots aligned); when next_active, the later
// neighbor's molecules land with their own first-slot probability
// profile[0].
RxDistribution rx_distribution(Bit prev_bit, Bit cur_bit, Bit next_bit,
                               const AbsorptionProfile& profile, const ModulationParams& mod,
                               const NoiseParams& noise, bool next_active = false);

// Draws slot realizations. Builds the binomial tables once, so one instance
// can serve a whole run; it is immutable and shareable across threads.
class SlotSampler {
public:
    SlotSampler(const AbsorptionProfile& profile, const ModulationParams& mod,
                const NoiseParams& noise, bool next_active = false);

    SlotComposition operator()(Bit prev_bit, Bit cur_bit, Bit next_bit, Rng& rng) const;

private:
    BinomialSampler signal_;
    BinomialSampler prev_isi_;
    BinomialSampler next_isi_;
    double sigma_ = 0.0;
    bool next_active_ = false;
};

// Single-shot convenience wrapper around SlotSampler.
SlotComposition sample_slot(Bit prev_bit, Bit cur_bit, Bit next_bit,
                            const AbsorptionProfile& profile, const ModulationParams& mod,
                            const NoiseParams& noise, bool next_active, Rng& rng);

} // namespace mcsim
