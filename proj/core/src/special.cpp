#include "clusterkit/special.hpp"

#include <array>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "clusterkit/error.hpp"
#include "clusterkit/logmath.hpp"

namespace clusterkit {

double zeta(double s) {
  require(std::isfinite(s) && s != 1.0, ErrorCode::kInvalidParameter,
          "zeta needs a finite s != 1");
  // B_{2j} / (2j)! for j = 1..8.
  static constexpr std::array<double, 8> kB = {
      1.0 / 12.0,
      -1.0 / 720.0,
      1.0 / 30240.0,
      -1.0 / 1209600.0,
      1.0 / 47900160.0,
      -691.0 / 1307674368000.0,
      1.0 / 74724249600.0,
      -3617.0 / 10670622842880000.0,
  };
  constexpr int N = 20;
  double sum = 0.0;
  for (int k = N - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
  const double dn = N;
  sum += std::pow(dn, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(dn, -s);
  // s (s+1) ... (s+2j-2) N^{-s-2j+1}
  double rising = s;
  double npow = std::pow(dn, -s - 1.0);
  for (std::size_t j = 0; j < kB.size(); ++j) {
    sum += kB[j] * rising * npow;
    rising *= (s + 2.0 * static_cast<double>(j) + 1.0) *
              (s + 2.0 * static_cast<double>(j) + 2.0);
    npow /= dn * dn;
  }
  return sum;
}

double em_d1(double beta, double gamma) {
  require(beta >= 0.0 && gamma >= 0.0 && beta < 1.0 + gamma,
          ErrorCode::kInvalidParameter, "d_1 needs 0 <= beta < 1 + gamma");
  using boost::math::quadrature::gauss_kronrod;
  auto integrand = [=](double t) {
    if (t <= 0.0) return 0.0;
    return std::exp(gamma * std::log(t) - t -
                    beta * std::log(-std::expm1(-t)));
  };
  // On [0,1] the singular factor t^(gamma-beta) is absorbed by t = u^(1/e).
  const double e = 1.0 + gamma - beta;
  auto head = [=](double u) {
    if (u <= 0.0) return 0.0;
    const double t = std::pow(u, 1.0 / e);
    return integrand(t) * t / (e * u);
  };
  const double a = gauss_kronrod<double, 61>::integrate(head, 0.0, 1.0, 15, 1e-13);
  const double b = gauss_kronrod<double, 61>::integrate(
      integrand, 1.0, std::numeric_limits<double>::infinity(), 15, 1e-13);
  return a + b;
}

double em_direct_sum(double beta, double gamma, double chi) {
  require(chi > 0.0, ErrorCode::kInvalidParameter, "chi must be positive");
  LogAccumulator acc;
  for (std::int64_t k = 1;; ++k) {
    const double x = chi * static_cast<double>(k);
    const double term = gamma * std::log(static_cast<double>(k)) - x -
                        beta * std::log(-std::expm1(-x));
    acc.add(term);
    if (x > 40.0 + gamma * std::log(static_cast<double>(k)) &&
        term < acc.max_term() - 40.0) {
      break;
    }
  }
  return std::exp(acc.value());
}

}  // namespace clusterkit
