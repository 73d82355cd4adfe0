#include "abreu/polynomial.hpp"

#include <algorithm>

namespace abreu {

Polynomial2::Polynomial2(int degree)
    : degree_(degree), coeffs_(static_cast<std::size_t>((degree + 1) * (degree + 1)), 0.0) {}

Polynomial2::Polynomial2(const std::vector<Term>& terms) {
  int degree = 0;
  for (const auto& t : terms) degree = std::max(degree, t.x_power + t.y_power);
  *this = Polynomial2(degree);
  for (const auto& t : terms) at(t.x_power, t.y_power) += t.coefficient;
}

Polynomial2 Polynomial2::constant(double c) { return Polynomial2({{0, 0, c}}); }

Polynomial2 Polynomial2::monomial(int x_power, int y_power, double coefficient) {
  return Polynomial2({{x_power, y_power, coefficient}});
}

double Polynomial2::coefficient(int x_power, int y_power) const {
  if (x_power < 0 || y_power < 0 || x_power > degree_ || y_power > degree_) return 0.0;
  return at(x_power, y_power);
}

std::vector<Polynomial2::Term> Polynomial2::terms() const {
  std::vector<Term> out;
  for (int i = 0; i <= degree_; ++i)
    for (int j = 0; j + i <= degree_; ++j)
      if (at(i, j) != 0.0) out.push_back({i, j, at(i, j)});
  return out;
}

double Polynomial2::evaluate(const Point& p) const {
  // Horner in x over Horner-in-y rows.
  double result = 0.0;
  for (int i = degree_; i >= 0; --i) {
    double row = 0.0;
    for (int j = degree_ - i; j >= 0; --j) row = row * p.y() + at(i, j);
    result = result * p.x() + row;
  }
  return result;
}

Polynomial2 Polynomial2::derivative(int dx, int dy) const {
  Polynomial2 out(std::max(0, degree_ - dx - dy));
  for (int i = dx; i <= degree_; ++i) {
    for (int j = dy; j + i <= degree_; ++j) {
      double c = at(i, j);
      if (c == 0.0) continue;
      for (int k = 0; k < dx; ++k) c *= static_cast<double>(i - k);
      for (int k = 0; k < dy; ++k) c *= static_cast<double>(j - k);
      out.at(i - dx, j - dy) += c;
    }
  }
  return out;
}

Point Polynomial2::gradient(const Point& p) const {
  return {derivative(1, 0)(p), derivative(0, 1)(p)};
}

Sym2 Polynomial2::hessian(const Point& p) const {
  return {derivative(2, 0)(p), derivative(1, 1)(p), derivative(0, 2)(p)};
}

Polynomial2 Polynomial2::operator+(const Polynomial2& other) const {
  Polynomial2 out(std::max(degree_, other.degree_));
  for (int i = 0; i <= degree_; ++i)
    for (int j = 0; i + j <= degree_; ++j) out.at(i, j) += at(i, j);
  for (int i = 0; i <= other.degree_; ++i)
    for (int j = 0; i + j <= other.degree_; ++j) out.at(i, j) += other.at(i, j);
  return out;
}

Polynomial2 Polynomial2::operator-(const Polynomial2& other) const { return *this + other * -1.0; }

Polynomial2 Polynomial2::operator*(const Polynomial2& other) const {
  Polynomial2 out(degree_ + other.degree_);
  for (int i = 0; i <= degree_; ++i)
    for (int j = 0; i + j <= degree_; ++j) {
      const double a = at(i, j);
      if (a == 0.0) continue;
      for (int k = 0; k <= other.degree_; ++k)
        for (int l = 0; k + l <= other.degree_; ++l) out.at(i + k, j + l) += a * other.at(k, l);
    }
  return out;
}

Polynomial2 Polynomial2::operator*(double s) const {
  Polynomial2 out = *this;
  for (auto& c : out.coeffs_) c *= s;
  return out;
}

Polynomial2 Polynomial2::compose_linear(const Mat2& m) const {
  // x -> m00 x + m01 y, y -> m10 x + m11 y
  const Polynomial2 lx({{1, 0, m(0, 0)}, {0, 1, m(0, 1)}});
  const Polynomial2 ly({{1, 0, m(1, 0)}, {0, 1, m(1, 1)}});
  std::vector<Polynomial2> px{constant(1.0)}, py{constant(1.0)};
  for (int k = 1; k <= degree_; ++k) {
    px.push_back(px.back() * lx);
    py.push_back(py.back() * ly);
  }
  Polynomial2 out = constant(0.0);
  for (int i = 0; i <= degree_; ++i)
    for (int j = 0; i + j <= degree_; ++j)
      if (at(i, j) != 0.0) out = out + px[static_cast<std::size_t>(i)] * py[static_cast<std::size_t>(j)] * at(i, j);
  return out;
}

}  // namespace abreu
