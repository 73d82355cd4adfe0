#pragma once

#include "abreu/domain.hpp"
#include "abreu/error.hpp"
#include "abreu/field.hpp"
#include "abreu/grid.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>

namespace test {

inline std::shared_ptr<const abreu::Domain> unit_disk() {
  return std::make_shared<const abreu::Domain>(abreu::Domain::disk(abreu::Point::Zero(), 1.0));
}

inline abreu::GridPtr disk_grid(double h) { return abreu::Grid::build(unit_disk(), h); }

inline double max_error(const abreu::ScalarField& v, const abreu::PointFunction& exact) {
  double e = 0.0;
  for (std::size_t n = 0; n < v.size(); ++n) e = std::max(e, std::abs(v[n] - exact(v.grid().node(n))));
  return e;
}

inline double order(double coarse_error, double fine_error) { return std::log2(coarse_error / fine_error); }

template <class F>
abreu::ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const abreu::Error& e) {
    return e.kind();
  }
  FAIL("expected an abreu::Error");
  return abreu::ErrorKind::Io;
}

}  // namespace test
