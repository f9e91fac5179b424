#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace dival {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  CompensatedComplexSum& operator+=(std::complex<double> z) {
    add(z);
    return *this;
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_, im_;
};

/// Table of e(j/q) = exp(2 pi i j / q), j = 0..q-1. Phases are reduced
/// mod q in integers before lookup, so long sums never accumulate angle
/// drift.
class UnitRoots {
 public:
  explicit UnitRoots(std::uint64_t q) : q_(q), table_(q) {
    for (std::uint64_t j = 0; j < q; ++j) {
      double angle = 2.0 * std::numbers::pi * double(j) / double(q);
      table_[j] = {std::cos(angle), std::sin(angle)};
    }
  }
  std::uint64_t modulus() const { return q_; }
  std::complex<double> operator[](std::uint64_t j) const { return table_[j]; }

 private:
  std::uint64_t q_;
  std::vector<std::complex<double>> table_;
};

}  // namespace dival
