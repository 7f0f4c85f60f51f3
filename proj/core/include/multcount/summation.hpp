#pragma once

namespace multcount {

// Kahan compensated accumulator. The predictor series run to ~1e8 terms of
// mixed magnitudes; plain summation loses several digits there.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }

  double value() const { return sum; }
};

}  // namespace multcount
