#pragma once

#include <cmath>
#include <complex>

namespace logtauber {

/// Neumaier's variant of Kahan summation. The running compensation captures
/// the low-order bits lost by each addition, including the case where the
/// incoming term is larger than the partial sum.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double initial) : sum_(initial) {}

  CompensatedSum& add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  CompensatedSum& operator+=(double x) noexcept { return add(x); }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Two independent compensated channels for (real, imaginary) accumulation.
class CompensatedComplexSum {
 public:
  CompensatedComplexSum& add(std::complex<double> z) noexcept {
    re_.add(z.real());
    im_.add(z.imag());
    return *this;
  }
  CompensatedComplexSum& operator+=(std::complex<double> z) noexcept {
    return add(z);
  }
  std::complex<double> value() const noexcept {
    return {re_.value(), im_.value()};
  }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

}  // namespace logtauber
