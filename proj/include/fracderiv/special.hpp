#pragma once

namespace fracderiv {

/// Gamma function for real arguments via the Lanczos approximation (g = 7,
/// nine terms), with the reflection formula below 1/2. Relative error is
/// around 1e-15 on (0, 20). Poles (non-positive integers) return NaN.
double gamma_fn(double x);

} // namespace fracderiv
