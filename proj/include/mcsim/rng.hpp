#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mcsim {

// Derives an independent stream seed from (master, stream, substream) with a
// splitmix-style finalizer. Trials and sweep points each get their own
// stream so runs can be parallelized without sharing generator state.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t substream = 0);

// Seeded random stream. The samplers are hand-rolled (CDF inversion,
// Box-Muller) so a given seed produces the same draws on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // N(0, sigma^2)
    double normal(double sigma);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Samples Binomial(n, p) by inverting a precomputed CDF table. Immutable
// after construction; safe to share across threads.
class BinomialSampler {
public:
    BinomialSampler(int n, double p);

    int operator()(Rng& rng) const;

    int n() const { return n_; }

private:
    int n_ = 0;
    std::vector<double> cdf_;
};

} // namespace mcsim
