#pragma once

#include "cubespec/cube_function.hpp"
#include "cubespec/simplex.hpp"

namespace cubespec {

struct ApproxNormResult {
  double value = 0.0;
  CubeFunction witness{0, Side::Point};  // point side, ||f - witness||_inf <= epsilon
  double epsilon = 0.0;
  long iterations = 0;
};

// The least spectral norm over all g within sup-distance epsilon of f,
// computed exactly as a linear program over the coefficients of g (split
// into positive and negative parts). Requires 0 <= epsilon < 1/2 and
// n <= 10.
ApproxNormResult approx_spectral_norm(const CubeFunction& f, double epsilon,
                                      const SolveOptions& options = {});

}  // namespace cubespec
