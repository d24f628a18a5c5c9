#pragma once

namespace clusterkit {

// Riemann zeta for real s != 1 by Euler-Maclaurin summation with eight
// Bernoulli corrections after N = 20 explicit terms.
double zeta(double s);

// d_1(beta, gamma) = int_0^inf t^gamma e^{-t} / (1 - e^{-t})^beta dt, finite
// for beta < 1 + gamma.
double em_d1(double beta, double gamma);

// sum_{k>=1} k^gamma e^{-chi k} / (1 - e^{-chi k})^beta by direct summation,
// for display next to the regime prediction.
double em_direct_sum(double beta, double gamma, double chi);

}  // namespace clusterkit
