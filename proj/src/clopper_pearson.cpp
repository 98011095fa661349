#include <stdexcept>

#include <boost/math/distributions/beta.hpp>

#include "rounderr/simulate.hpp"

namespace rounderr::sim {

Interval confidence_interval(std::uint64_t successes, std::uint64_t trials, double level) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    if (successes > trials) throw std::invalid_argument("successes exceed trials");
    if (!(level > 0 && level < 1)) throw std::invalid_argument("level must be in (0,1)");

    const double alpha = 1.0 - level;
    const double s = static_cast<double>(successes);
    const double n = static_cast<double>(trials);
    Interval iv;
    if (successes == 0) {
        iv.lo = 0.0;
    } else {
        boost::math::beta_distribution<double> lo_dist(s, n - s + 1);
        iv.lo = boost::math::quantile(lo_dist, alpha / 2);
    }
    if (successes == trials) {
        iv.hi = 1.0;
    } else {
        boost::math::beta_distribution<double> hi_dist(s + 1, n - s);
        iv.hi = boost::math::quantile(hi_dist, 1 - alpha / 2);
    }
    return iv;
}

}  // namespace rounderr::sim
