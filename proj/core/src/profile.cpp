#include "pwaves/profile.hpp"

#include <cmath>
#include <string>

#include "pwaves/errors.hpp"

namespace pwaves {

ShearProfile::ShearProfile(double epsilon, double epsilon_max) : eps_(epsilon) {
    if (!(epsilon > 0.0))
        throw PreconditionError("epsilon must be > 0, got " + std::to_string(epsilon));
    if (!(epsilon_max > 0.0 && epsilon_max < 1.0))
        throw PreconditionError("epsilon_max must lie in (0,1)");
    if (epsilon > epsilon_max)
        throw PreconditionError("epsilon " + std::to_string(epsilon) + " exceeds epsilon_max " +
                                std::to_string(epsilon_max));
    a_ = 0.5 * (1.0 - epsilon);
    b_ = 0.5 * (1.0 + epsilon);
    v_ = -u_int(1.0) - 1.0 / 3.0;
}

double ShearProfile::check(double y) const {
    if (!(y >= -1e-12 && y <= 1.0 + 1e-12))
        throw PreconditionError("position " + std::to_string(y) + " outside [0,1]");
    return std::fmin(std::fmax(y, 0.0), 1.0);
}

double ShearProfile::varpi(double y) const {
    y = check(y);
    if (y < a_) return -2.0 * y;
    if (y <= b_) return -2.0 * a_;
    return -2.0 * (y - b_) - 2.0 * a_;
}

double ShearProfile::varpi_prime(double y) const {
    y = check(y);
    if (y <= a_) return -2.0;
    if (y <= b_) return 0.0;
    return -2.0;
}

double ShearProfile::u(double y) const {
    y = check(y);
    if (y < a_) return -y * y;
    if (y <= b_) return -2.0 * a_ * y + a_ * a_;
    const double t = y - b_;
    return -t * t - 2.0 * a_ * y + a_ * a_;
}

double ShearProfile::u_int(double y) const {
    const double a = a_, b = b_;
    if (y < a) return -y * y * y / 3.0;
    const double ua = -a * a * a / 3.0;
    if (y <= b) return ua - a * (y * y - a * a) + a * a * (y - a);
    const double ub = ua - a * (b * b - a * a) + a * a * (b - a);
    const double t = y - b;
    return ub - t * t * t / 3.0 - a * (y * y - b * b) + a * a * (y - b);
}

double ShearProfile::psi0_prime(double y) const { return u(y) + v_; }

double ShearProfile::psi0(double y) const {
    y = check(y);
    return u_int(y) + v_ * y;
}

double ShearProfile::varpi_ext(double y) const {
    if (y < 0.0) return -varpi(-y);
    return varpi(y);
}

ShearProfile make_profile(double epsilon, double epsilon_max) {
    return ShearProfile(epsilon, epsilon_max);
}

}  // namespace pwaves
