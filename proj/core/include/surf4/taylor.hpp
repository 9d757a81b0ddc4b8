#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace surf4 {

// Bivariate truncated Taylor scalar of total degree <= Order (2 or 3).
// Coefficient c[k] multiplies du^i dv^j in the monomial order
//   (0,0) (1,0) (0,1) (2,0) (1,1) (0,2) [(3,0) (2,1) (1,2) (0,3)],
// i.e. c[k] = d^{i+j} f / (du^i dv^j) / (i! j!).  Arithmetic is truncated
// polynomial algebra; elementary functions are composed through their
// univariate Taylor expansion around the constant term.
template <int Order>
struct Taylor {
  static_assert(Order == 2 || Order == 3, "jet order must be 2 or 3");
  static constexpr int kTerms = (Order == 2) ? 6 : 10;

  std::array<double, kTerms> c{};

  Taylor() = default;
  Taylor(double value) { c[0] = value; }  // NOLINT: implicit by design

  static Taylor variable_u(double u0) {
    Taylor t;
    t.c[0] = u0;
    t.c[1] = 1.0;
    return t;
  }
  static Taylor variable_v(double v0) {
    Taylor t;
    t.c[0] = v0;
    t.c[2] = 1.0;
    return t;
  }

  double value() const { return c[0]; }
  double du() const { return c[1]; }
  double dv() const { return c[2]; }
  double duu() const { return 2.0 * c[3]; }
  double duv() const { return c[4]; }
  double dvv() const { return 2.0 * c[5]; }
  double duuu() const { return Order >= 3 ? 6.0 * c[6] : 0.0; }
  double duuv() const { return Order >= 3 ? 2.0 * c[7] : 0.0; }
  double duvv() const { return Order >= 3 ? 2.0 * c[8] : 0.0; }
  double dvvv() const { return Order >= 3 ? 6.0 * c[9] : 0.0; }

  Taylor operator-() const {
    Taylor out;
    for (int k = 0; k < kTerms; ++k) out.c[k] = -c[k];
    return out;
  }
  Taylor& operator+=(const Taylor& o) {
    for (int k = 0; k < kTerms; ++k) c[k] += o.c[k];
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    for (int k = 0; k < kTerms; ++k) c[k] -= o.c[k];
    return *this;
  }

  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }

  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    Taylor out;
    for (int ka = 0; ka < kTerms; ++ka) {
      if (a.c[ka] == 0.0) continue;
      const int ia = kExpU[ka], ja = kExpV[ka];
      for (int kb = 0; kb < kTerms; ++kb) {
        if (b.c[kb] == 0.0) continue;
        const int i = ia + kExpU[kb], j = ja + kExpV[kb];
        if (i + j > Order) continue;
        out.c[index_of(i, j)] += a.c[ka] * b.c[kb];
      }
    }
    return out;
  }

  friend Taylor operator*(double s, Taylor a) {
    for (int k = 0; k < kTerms; ++k) a.c[k] *= s;
    return a;
  }
  friend Taylor operator*(Taylor a, double s) { return s * a; }
  friend Taylor operator/(Taylor a, double s) { return (1.0 / s) * a; }
  friend Taylor operator/(const Taylor& a, const Taylor& b) {
    return a * recip(b);
  }

  // h(f) truncated at total degree Order: h0 + h1 w + h2/2 w^2 + h3/6 w^3
  // with w = f - f.value() (no constant term, so powers truncate quickly).
  static Taylor compose(const Taylor& f, double h0, double h1, double h2,
                        double h3) {
    Taylor w = f;
    w.c[0] = 0.0;
    Taylor w2 = w * w;
    Taylor out = w2 * (h2 / 2.0);
    if constexpr (Order >= 3) out += (w2 * w) * (h3 / 6.0);
    out += w * h1;
    out.c[0] += h0;
    return out;
  }

  friend Taylor recip(const Taylor& f) {
    const double x = f.value();
    const double ix = 1.0 / x;
    return compose(f, ix, -ix * ix, 2.0 * ix * ix * ix,
                   -6.0 * ix * ix * ix * ix);
  }
  friend Taylor sqrt(const Taylor& f) {
    const double x = f.value();
    const double r = std::sqrt(x);
    return compose(f, r, 0.5 / r, -0.25 / (r * x), 0.375 / (r * x * x));
  }
  friend Taylor sin(const Taylor& f) {
    const double s = std::sin(f.value()), co = std::cos(f.value());
    return compose(f, s, co, -s, -co);
  }
  friend Taylor cos(const Taylor& f) {
    const double s = std::sin(f.value()), co = std::cos(f.value());
    return compose(f, co, -s, -co, s);
  }
  friend Taylor sinh(const Taylor& f) {
    const double s = std::sinh(f.value()), co = std::cosh(f.value());
    return compose(f, s, co, s, co);
  }
  friend Taylor cosh(const Taylor& f) {
    const double s = std::sinh(f.value()), co = std::cosh(f.value());
    return compose(f, co, s, co, s);
  }
  friend Taylor exp(const Taylor& f) {
    const double e = std::exp(f.value());
    return compose(f, e, e, e, e);
  }
  friend Taylor log(const Taylor& f) {
    const double x = f.value();
    return compose(f, std::log(x), 1.0 / x, -1.0 / (x * x),
                   2.0 / (x * x * x));
  }
  friend Taylor pow_int(const Taylor& f, int n) {
    Taylor out(1.0);
    for (int k = 0; k < n; ++k) out = out * f;
    return out;
  }

 private:
  static constexpr std::array<int, 10> kExpU = {0, 1, 0, 2, 1, 0, 3, 2, 1, 0};
  static constexpr std::array<int, 10> kExpV = {0, 0, 1, 0, 1, 2, 0, 1, 2, 3};

  static constexpr int index_of(int i, int j) {
    const int d = i + j;
    const int base = d * (d + 1) / 2;  // terms of total degree < d
    return base + j;
  }
};

using Taylor2 = Taylor<2>;
using Taylor3 = Taylor<3>;

}  // namespace surf4
