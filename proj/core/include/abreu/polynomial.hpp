#pragma once

#include "abreu/types.hpp"

#include <vector>

namespace abreu {

// Bivariate polynomial sum c_ij x^i y^j with exact derivatives. Backs the
// closed-form fixtures and polynomial level-set domains.
class Polynomial2 {
 public:
  struct Term {
    int x_power;
    int y_power;
    double coefficient;
  };

  Polynomial2() = default;
  explicit Polynomial2(const std::vector<Term>& terms);

  static Polynomial2 constant(double c);
  static Polynomial2 monomial(int x_power, int y_power, double coefficient = 1.0);

  int degree() const noexcept { return degree_; }
  double coefficient(int x_power, int y_power) const;
  std::vector<Term> terms() const;

  double operator()(const Point& p) const { return evaluate(p); }
  double evaluate(const Point& p) const;

  Polynomial2 derivative(int dx, int dy) const;
  Point gradient(const Point& p) const;
  Sym2 hessian(const Point& p) const;

  Polynomial2 operator+(const Polynomial2& other) const;
  Polynomial2 operator-(const Polynomial2& other) const;
  Polynomial2 operator*(const Polynomial2& other) const;
  Polynomial2 operator*(double s) const;

  // p(M x): substitution of a linear map.
  Polynomial2 compose_linear(const Mat2& m) const;

 private:
  explicit Polynomial2(int degree);
  double& at(int i, int j) { return coeffs_[static_cast<std::size_t>(i * (degree_ + 1) + j)]; }
  double at(int i, int j) const { return coeffs_[static_cast<std::size_t>(i * (degree_ + 1) + j)]; }

  int degree_ = 0;
  std::vector<double> coeffs_ = {0.0};  // (degree+1)^2, row i = power of x
};

}  // namespace abreu
