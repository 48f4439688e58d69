#pragma once

#include <cmath>

namespace sudler {

// Neumaier's variant of Kahan summation. Order of additions matters for
// bitwise reproducibility, so callers own the ordering.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }

    void add(const CompensatedSum& other) {
        add(other.sum);
        add(other.comp);
    }

    double value() const { return sum + comp; }
};

}  // namespace sudler
