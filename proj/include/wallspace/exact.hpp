#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace wallspace {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& r);

/// An angle stored as its exact coefficient of pi.
struct Angle {
  Rational coef;

  Angle() = default;
  explicit Angle(Rational c) : coef(c) {}
  Angle(std::int64_t num, std::int64_t den) : coef(num, den) {}

  double radians() const;

  friend Angle operator+(Angle a, Angle b) { return Angle(a.coef + b.coef); }
  friend Angle operator-(Angle a, Angle b) { return Angle(a.coef - b.coef); }
  friend bool operator==(const Angle& a, const Angle& b) { return a.coef == b.coef; }
  friend bool operator<(const Angle& a, const Angle& b) { return a.coef < b.coef; }
  friend bool operator<=(const Angle& a, const Angle& b) { return a.coef <= b.coef; }
  friend bool operator>(const Angle& a, const Angle& b) { return a.coef > b.coef; }
  friend bool operator>=(const Angle& a, const Angle& b) { return a.coef >= b.coef; }
};

std::string to_string(const Angle& a);

/// Element a + b*sqrt(3) of Q(sqrt 3); exact chart coordinates live here.
struct Q3 {
  Rational a{0};
  Rational b{0};

  Q3() = default;
  Q3(Rational a_, Rational b_ = Rational(0)) : a(a_), b(b_) {}

  double value() const;
  int sign() const;
  bool is_zero() const { return a == Rational(0) && b == Rational(0); }

  friend Q3 operator+(const Q3& x, const Q3& y) { return {x.a + y.a, x.b + y.b}; }
  friend Q3 operator-(const Q3& x, const Q3& y) { return {x.a - y.a, x.b - y.b}; }
  friend Q3 operator-(const Q3& x) { return {-x.a, -x.b}; }
  friend Q3 operator*(const Q3& x, const Q3& y) {
    return {x.a * y.a + Rational(3) * x.b * y.b, x.a * y.b + x.b * y.a};
  }
  friend Q3 operator/(const Q3& x, const Q3& y);
  friend bool operator==(const Q3& x, const Q3& y) { return x.a == y.a && x.b == y.b; }
  friend bool operator!=(const Q3& x, const Q3& y) { return !(x == y); }
  friend bool operator<(const Q3& x, const Q3& y) { return (x - y).sign() < 0; }
};

std::string to_string(const Q3& q);

struct Point {
  Q3 x, y;
  friend Point operator+(const Point& p, const Point& q) { return {p.x + q.x, p.y + q.y}; }
  friend Point operator-(const Point& p, const Point& q) { return {p.x - q.x, p.y - q.y}; }
  friend bool operator==(const Point& p, const Point& q) { return p.x == q.x && p.y == q.y; }
  friend bool operator<(const Point& p, const Point& q) {
    if (p.x != q.x) return p.x < q.x;
    return p.y < q.y;
  }
};

inline Point scale(const Point& p, const Q3& s) { return {p.x * s, p.y * s}; }
inline Q3 dot(const Point& p, const Point& q) { return p.x * q.x + p.y * q.y; }
inline Q3 cross(const Point& p, const Point& q) { return p.x * q.y - p.y * q.x; }

/// Unit vector at angle coef*pi when coef is a multiple of 1/6; false otherwise.
bool unit_direction(const Rational& coef, Point& out);

}  // namespace wallspace
