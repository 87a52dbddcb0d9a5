#include "wallspace/exact.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wallspace {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double Angle::radians() const {
  return std::numbers::pi * static_cast<double>(coef.numerator()) /
         static_cast<double>(coef.denominator());
}

std::string to_string(const Angle& a) { return to_string(a.coef) + "pi"; }

double Q3::value() const {
  return boost::rational_cast<double>(a) + boost::rational_cast<double>(b) * std::sqrt(3.0);
}

int Q3::sign() const {
  auto sgn = [](const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); };
  int sa = sgn(a), sb = sgn(b);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // opposite signs: compare a^2 with 3 b^2
  Rational lhs = a * a, rhs = Rational(3) * b * b;
  if (lhs == rhs) return 0;
  return lhs > rhs ? sa : sb;
}

Q3 operator/(const Q3& x, const Q3& y) {
  Rational n = y.a * y.a - Rational(3) * y.b * y.b;
  if (n == Rational(0)) throw std::domain_error("Q3 division by zero");
  Q3 conj{y.a / n, -y.b / n};
  return x * conj;
}

std::string to_string(const Q3& q) {
  if (q.b == Rational(0)) return to_string(q.a);
  if (q.a == Rational(0)) return to_string(q.b) + "*sqrt3";
  return to_string(q.a) + (q.b > 0 ? "+" : "-") + to_string(boost::abs(q.b)) + "*sqrt3";
}

bool unit_direction(const Rational& coef, Point& out) {
  Rational k = coef * Rational(6);
  if (k.denominator() != 1) return false;
  std::int64_t m = ((k.numerator() % 12) + 12) % 12;
  const Rational h(1, 2);
  // cos and sin of m*pi/6
  static const Q3 c[12] = {{1},        {0, h},  {h},       {0},  {-h},      {0, -h},
                           {-1},       {0, -h}, {-h},      {0},  {h},       {0, h}};
  static const Q3 s[12] = {{0},        {h},     {0, h},    {1},  {0, h},    {h},
                           {0},        {-h},    {0, -h},   {-1}, {0, -h},   {-h}};
  out = {c[m], s[m]};
  return true;
}

}  // namespace wallspace
