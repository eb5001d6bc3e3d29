#include "nlkpp/grid.hpp"

#include <algorithm>

namespace nlkpp {

double field_max(const Field& u) {
  double m = u.values.empty() ? 0.0 : u.values[0];
  for (double v : u.values) m = std::max(m, v);
  return m;
}

double field_min(const Field& u) {
  double m = u.values.empty() ? 0.0 : u.values[0];
  for (double v : u.values) m = std::min(m, v);
  return m;
}

double trapezoid(const Field& u) {
  const int n = u.size();
  if (n < 2) return 0.0;
  double s = 0.5 * (u.values[0] + u.values[n - 1]);
  for (int i = 1; i < n - 1; ++i) s += u.values[i];
  return s * u.grid.dx;
}

}  // namespace nlkpp
