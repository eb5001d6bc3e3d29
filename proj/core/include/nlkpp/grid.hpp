#pragma once

#include <vector>

namespace nlkpp {

// Uniform 1-D grid: node i sits at x0 + i*dx.
struct Grid {
  double x0 = 0.0;
  double dx = 1.0;
  int n = 0;

  double node(int i) const { return x0 + i * dx; }
  double left() const { return x0; }
  double right() const { return x0 + (n - 1) * dx; }
  double width() const { return (n - 1) * dx; }
};

// Scalar field sampled on a grid at a fixed time.
struct Field {
  Grid grid;
  std::vector<double> values;
  double time = 0.0;

  int size() const { return static_cast<int>(values.size()); }
};

double field_max(const Field& u);
double field_min(const Field& u);

// Composite trapezoid of the nodal values.
double trapezoid(const Field& u);

}  // namespace nlkpp
