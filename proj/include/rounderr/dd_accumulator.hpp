#pragma once

namespace rounderr {

// Compensated double-double accumulator (twosum/fasttwosum, ~106 effective
// mantissa bits). Used where long sums must not lose the signal being
// measured: the hardware error reference and filter coefficient sums.
class DdAccumulator {
public:
    void add(double x) {
        double s, e;
        two_sum(hi_, x, s, e);
        lo_ += e;
        fast_two_sum(s, lo_, hi_, lo_);
    }

    double value() const { return hi_ + lo_; }
    double head() const { return hi_; }
    double tail() const { return lo_; }

private:
    static void two_sum(double a, double b, double& s, double& e) {
        s = a + b;
        double bb = s - a;
        e = (a - (s - bb)) + (b - bb);
    }
    static void fast_two_sum(double a, double b, double& s, double& e) {
        s = a + b;
        e = (a - s) + b;
    }

    double hi_ = 0.0;
    double lo_ = 0.0;
};

}  // namespace rounderr
