#include "floorsep/rng.hpp"

#include <cmath>

namespace floorsep {

double Rng::normal(double mean, double sigma) {
  double u1 = next_double();
  double u2 = next_double();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  return mean + sigma * z;
}

}  // namespace floorsep
