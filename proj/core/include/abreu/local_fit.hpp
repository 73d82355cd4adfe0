#pragma once

#include "abreu/field.hpp"

namespace abreu {

struct LocalFit {
  double value = 0.0;
  Point gradient = Point::Zero();
  Sym2 hessian;
  int samples = 0;
};

// Least-squares quadratic through the interior nodes and boundary hits within
// `radius_cells` lattice steps of p (widened until enough samples are found).
// Exact on quadratics; near the boundary it is a one-sided fit.
LocalFit local_quadratic_fit(const ScalarField& field, const Point& p, double radius_cells = 2.5);

// Value of the field at an arbitrary point of the closed domain. Throws
// ErrorKind::OutOfDomain for points outside it.
double interpolate(const ScalarField& field, const Point& p);

}  // namespace abreu
