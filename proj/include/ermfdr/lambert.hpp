#pragma once

namespace ermfdr {

// Principal branch W0 of the Lambert function: returns w >= -1 with w*exp(w) = x.
// Requires x >= -1/e; throws DomainError otherwise.
double lambert_w0(double x);

// W0(exp(y)) computed without forming exp(y), safe for y beyond the overflow
// range of exp. Solves h + log(h) = y.
double lambert_w0_of_exp(double y);

}  // namespace ermfdr
