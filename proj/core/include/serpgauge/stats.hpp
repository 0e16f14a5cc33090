#pragma once

namespace serpgauge::stats {

/// Inverse CDF of the standard normal distribution.
/// Accurate to ~1e-15 over (0, 1); p must lie strictly inside (0, 1).
double normal_quantile(double p);

/// Two-sided z value for a confidence level in (0, 1), e.g. 0.95 -> 1.95996.
double two_sided_z(double confidence);

}  // namespace serpgauge::stats
