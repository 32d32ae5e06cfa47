#ifndef ROUGHIR_COMPENSATED_SUM_HPP
#define ROUGHIR_COMPENSATED_SUM_HPP

#include <cmath>

namespace roughir {

/// Neumaier (improved Kahan-Babuska) running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace roughir

#endif  // ROUGHIR_COMPENSATED_SUM_HPP
