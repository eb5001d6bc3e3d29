#pragma once

#include <memory>
#include <vector>

#include "nlkpp/grid.hpp"
#include "nlkpp/kernel.hpp"

namespace nlkpp {

// Discrete convolution (K*u)(x_i), midpoint rule on the cells of u's grid:
//
//   (K*u)(x_i) ≈ dx * sum_j K((i-j-1/2) dx) * (u_j + u_{j+1})/2
//
// u is extended by zero outside its grid. The kernel is sampled at the
// half-offsets so the jump at the origin always falls on a cell boundary,
// never on a quadrature point.
//
// `conv` runs the fast path (prefix sums for constant-halves kernels, padded
// real FFT otherwise); `conv_direct` is the O(n^2) reference summation of the
// same quadrature. The two agree to ~1e-10 relative.
Field conv(const Kernel& k, const Field& u);
Field conv_direct(const Kernel& k, const Field& u);

// d/dx of the convolution: centered second-order differences of conv(k,u),
// one-sided second-order stencils at the two boundary nodes.
Field conv_dx(const Kernel& k, const Field& u);

// Differentiate an already-computed convolution (same stencils as conv_dx).
Field differentiate(const Field& v);

// Reusable convolution state for a fixed grid: kernel samples, FFT plans and
// the kernel spectrum survive across repeated applications (one forward and
// one inverse transform per call). Rebuild after any domain change.
class ConvolutionEngine {
public:
  // truncation_half_width: how far out the kernel is sampled; must be at
  // least the grid width (the discrete sum never reaches farther).
  ConvolutionEngine(const Kernel& k, const Grid& g, double truncation_half_width);
  ~ConvolutionEngine();

  ConvolutionEngine(const ConvolutionEngine&) = delete;
  ConvolutionEngine& operator=(const ConvolutionEngine&) = delete;

  const Grid& grid() const;

  // out must have grid().n entries.
  void apply(const std::vector<double>& u, std::vector<double>& out);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace nlkpp
