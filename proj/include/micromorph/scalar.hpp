#pragma once

// Exact scalar arithmetic: rationals over arbitrary-precision integers,
// extended by the imaginary unit (Gaussian rationals a + b*i). Every
// coefficient in the formal calculus lives here; floats exist only in the
// numeric oracle.

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <complex>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace micromorph {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<BigInt>;

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << r.numerator();
    if (r.denominator() != 1)
        os << "/" << r.denominator();
    return os.str();
}

class Scalar {
  public:
    Scalar() = default;
    Scalar(long n) : re_(BigInt(n)) {}  // NOLINT: implicit by design
    Scalar(const Rational& re) : re_(re) {}
    Scalar(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}
    static Scalar of(long num, long den) {
        if (den == 0)
            throw std::domain_error("Scalar: zero denominator");
        return Scalar(Rational(BigInt(num), BigInt(den)));
    }
    static Scalar i() { return Scalar(Rational(0), Rational(1)); }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }
    bool is_zero() const { return re_ == Rational(0) && im_ == Rational(0); }
    bool is_real() const { return im_ == Rational(0); }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        return {a.re_ + b.re_, a.im_ + b.im_};
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) {
        return {a.re_ - b.re_, a.im_ - b.im_};
    }
    friend Scalar operator-(const Scalar& a) { return {-a.re_, -a.im_}; }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        Rational n = b.re_ * b.re_ + b.im_ * b.im_;
        if (n == Rational(0))
            throw std::domain_error("Scalar: division by zero");
        return {(a.re_ * b.re_ + a.im_ * b.im_) / n, (a.im_ * b.re_ - a.re_ * b.im_) / n};
    }
    Scalar& operator+=(const Scalar& b) { *this = *this + b; return *this; }
    Scalar& operator-=(const Scalar& b) { *this = *this - b; return *this; }
    Scalar& operator*=(const Scalar& b) { *this = *this * b; return *this; }
    Scalar& operator/=(const Scalar& b) { *this = *this / b; return *this; }
    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    Scalar conj() const { return {re_, -im_}; }

    Scalar pow(unsigned e) const {
        Scalar acc(1), base = *this;
        while (e) {
            if (e & 1u)
                acc *= base;
            base *= base;
            e >>= 1u;
        }
        return acc;
    }

    std::complex<double> to_complex() const { return {to_double(re_), to_double(im_)}; }

    // "3", "-1/2", "i", "-2/3*i", "3+1/2*i"
    std::string str() const {
        if (is_zero())
            return "0";
        std::string s;
        if (re_ != Rational(0)) {
            s += to_string(re_);
        }
        if (im_ != Rational(0)) {
            if (!s.empty())
                s += im_ > Rational(0) ? "+" : "-";
            else if (im_ < Rational(0))
                s += "-";
            Rational a = im_ > Rational(0) ? im_ : -im_;
            if (a != Rational(1))
                s += to_string(a) + "*i";
            else
                s += "i";
        }
        return s;
    }

  private:
    Rational re_{0};
    Rational im_{0};
};

// i^e as an exact scalar, e arbitrary non-negative.
inline Scalar i_pow(unsigned e) {
    switch (e % 4u) {
        case 0: return Scalar(1);
        case 1: return Scalar::i();
        case 2: return Scalar(-1);
        default: return -Scalar::i();
    }
}

inline Scalar factorial(unsigned n) {
    BigInt f = 1;
    for (unsigned k = 2; k <= n; ++k)
        f *= k;
    return Scalar(Rational(f));
}

}  // namespace micromorph
