#pragma once

namespace pwaves {

inline constexpr double kDefaultEpsilonMax = 0.2;

struct Window {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    bool contains(double v) const { return v > lo && v < hi; }
};

// Plateau-perturbed Poiseuille vorticity on the half channel [0,1]:
//   -2y on [0,a), -2a on [a,b], -2(y-b)-2a on (b,1], with a=(1-eps)/2, b=(1+eps)/2.
class ShearProfile {
public:
    explicit ShearProfile(double epsilon, double epsilon_max = kDefaultEpsilonMax);

    double epsilon() const { return eps_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double v_varpi() const { return v_; }

    double varpi(double y) const;
    double varpi_prime(double y) const;  // a.e.; returns the left limit at a and b
    double u(double y) const;            // int_0^y varpi
    double psi0_prime(double y) const;   // u + v_varpi
    double psi0(double y) const;         // int_0^y psi0_prime
    double varpi_ext(double y) const;    // odd extension to [-1,1]

    Window admissible_window() const { return {a_ * a_, b_ * b_ - eps_ * eps_}; }

private:
    double check(double y) const;
    double u_int(double y) const;  // int_0^y u

    double eps_, a_, b_, v_;
};

ShearProfile make_profile(double epsilon, double epsilon_max = kDefaultEpsilonMax);

inline double varpi(const ShearProfile& p, double y) { return p.varpi(y); }
inline double u_velocity(const ShearProfile& p, double y) { return p.u(y); }
inline double v_varpi(const ShearProfile& p) { return p.v_varpi(); }
inline double psi0_prime(const ShearProfile& p, double y) { return p.psi0_prime(y); }
inline Window admissible_window(const ShearProfile& p) { return p.admissible_window(); }

}  // namespace pwaves
