#include "carleson/rng.hpp"

#include <cmath>
#include <numbers>

namespace carleson {

double Rng::log_uniform(double lo, double hi) {
    return lo * std::exp(uniform() * std::log(hi / lo));
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    do { u = uniform(); } while (u <= 0.0);
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 2.0 * std::numbers::pi * v;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

} // namespace carleson
