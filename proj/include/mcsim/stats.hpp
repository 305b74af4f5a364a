#pragma once

#include <vector>

namespace mcsim {

// Full Binomial(n, p) PMF over k = 0..n. Computed in log space so large n
// with extreme p does not underflow term by term.
std::vector<double> binomial_pmf(int n, double p);

// Single Binomial(n, p) PMF value at k; 0 outside [0, n].
double binomial_pmf_at(int n, int k, double p);

// Standard normal CDF.
double normal_cdf(double z);

// Dense linear convolution of two PMFs.
std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b);

} // namespace mcsim
