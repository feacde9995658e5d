#include "owal/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace owal {

double Rng::normal(double mean, double sigma) {
  const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
  const double u2 = uniform();
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  return mean + sigma * z;
}

int Rng::poisson(double mean) {
  if (mean <= 0.0) return 0;
  const double limit = std::exp(-mean);
  int k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform();
  } while (p > limit);
  return k - 1;
}

double Rng::beta_int(int a, int b) {
  const int n = a + b - 1;
  std::vector<double> u(static_cast<std::size_t>(n));
  for (double& v : u) v = uniform();
  std::nth_element(u.begin(), u.begin() + (a - 1), u.end());
  return u[static_cast<std::size_t>(a - 1)];
}

}  // namespace owal
