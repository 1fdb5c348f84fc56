#pragma once

#include <cstddef>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace erwd::testing {

/// Upper-tail p-value of Pearson's statistic for observed counts against
/// expected probabilities. Cells with zero probability must have zero count;
/// they are dropped from the degrees of freedom.
inline double chi_square_p(const std::vector<long long>& observed, const std::vector<double>& probs) {
    long long total = 0;
    for (long long o : observed) total += o;
    double stat = 0.0;
    int cells = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (probs[i] <= 0.0) {
            if (observed[i] != 0) return 0.0;
            continue;
        }
        const double e = probs[i] * static_cast<double>(total);
        const double r = static_cast<double>(observed[i]) - e;
        stat += r * r / e;
        ++cells;
    }
    if (cells < 2) return 1.0;
    const boost::math::chi_squared dist(cells - 1);
    return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace erwd::testing
