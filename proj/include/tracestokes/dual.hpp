#pragma once

#include <array>
#include <cmath>

namespace tracestokes {

/// Forward-mode dual number with three partial derivatives.
///
/// T may itself be a Dual, which yields exact second derivatives.
template <class T>
struct Dual {
  T v{};
  std::array<T, 3> d{};

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value) {}  // NOLINT(google-explicit-constructor)
  constexpr Dual(T value, std::array<T, 3> partials) : v(value), d(partials) {}

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < 3; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < 3; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int i = 0; i < 3; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const T inv = T(1.0) / o.v;
    for (int i = 0; i < 3; ++i) d[i] = (d[i] - v * inv * o.d[i]) * inv;
    v *= inv;
    return *this;
  }
};

template <class T>
Dual<T> operator-(Dual<T> a) {
  a.v = -a.v;
  for (auto& x : a.d) x = -x;
  return a;
}

template <class T>
Dual<T> operator+(Dual<T> a, const Dual<T>& b) { return a += b; }
template <class T>
Dual<T> operator-(Dual<T> a, const Dual<T>& b) { return a -= b; }
template <class T>
Dual<T> operator*(Dual<T> a, const Dual<T>& b) { return a *= b; }
template <class T>
Dual<T> operator/(Dual<T> a, const Dual<T>& b) { return a /= b; }

template <class T>
Dual<T> operator+(Dual<T> a, double b) { return a += Dual<T>(b); }
template <class T>
Dual<T> operator+(double a, Dual<T> b) { return b += Dual<T>(a); }
template <class T>
Dual<T> operator-(Dual<T> a, double b) { return a -= Dual<T>(b); }
template <class T>
Dual<T> operator-(double a, const Dual<T>& b) { return Dual<T>(a) - b; }
template <class T>
Dual<T> operator*(Dual<T> a, double b) {
  a.v *= b;
  for (auto& x : a.d) x *= b;
  return a;
}
template <class T>
Dual<T> operator*(double a, Dual<T> b) { return b * a; }
template <class T>
Dual<T> operator/(Dual<T> a, double b) { return a * (1.0 / b); }
template <class T>
Dual<T> operator/(double a, const Dual<T>& b) { return Dual<T>(a) / b; }

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  const T s = sqrt(a.v);
  const T half_inv = 0.5 / s;
  Dual<T> out;
  out.v = s;
  for (int i = 0; i < 3; ++i) out.d[i] = half_inv * a.d[i];
  return out;
}

template <class T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  const T ds = -sin(a.v);
  Dual<T> out;
  out.v = cos(a.v);
  for (int i = 0; i < 3; ++i) out.d[i] = ds * a.d[i];
  return out;
}

template <class T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  const T dc = cos(a.v);
  Dual<T> out;
  out.v = sin(a.v);
  for (int i = 0; i < 3; ++i) out.d[i] = dc * a.d[i];
  return out;
}

/// Independent variables (x_0, x_1, x_2) seeded with unit partials.
template <class T>
std::array<Dual<T>, 3> seed(const std::array<T, 3>& x) {
  std::array<Dual<T>, 3> out;
  for (int i = 0; i < 3; ++i) {
    out[i].v = x[i];
    out[i].d[i] = T(1.0);
  }
  return out;
}

}  // namespace tracestokes
