#include "pwaves_cli/report.hpp"

#include <cmath>
#include <limits>

namespace pwaves::cli {

const char* comparison_symbol(Comparison c) {
    switch (c) {
        case Comparison::abs_le: return "|v|<=";
        case Comparison::le: return "<=";
        case Comparison::lt: return "<";
        case Comparison::ge: return ">=";
        case Comparison::gt: return ">";
    }
    return "?";
}

bool compare(double v, Comparison c, double t) {
    if (!std::isfinite(v)) return false;
    switch (c) {
        case Comparison::abs_le: return std::abs(v) <= t;
        case Comparison::le: return v <= t;
        case Comparison::lt: return v < t;
        case Comparison::ge: return v >= t;
        case Comparison::gt: return v > t;
    }
    return false;
}

void VerificationReport::add_residual(std::string name, double value, double tolerance, std::string anchor,
                                      const double* override_tol) {
    const double t = override_tol ? *override_tol : tolerance;
    checks_.push_back({std::move(name), value, t, Comparison::abs_le, compare(value, Comparison::abs_le, t),
                       std::move(anchor)});
}

void VerificationReport::add(std::string name, double value, Comparison c, double threshold, std::string anchor) {
    checks_.push_back({std::move(name), value, threshold, c, compare(value, c, threshold), std::move(anchor)});
}

void VerificationReport::add_failure(std::string name, std::string anchor, const std::string& error) {
    errors_.push_back(name + ": " + error);
    checks_.push_back({std::move(name), std::numeric_limits<double>::quiet_NaN(), 0.0, Comparison::abs_le, false,
                       std::move(anchor)});
}

bool VerificationReport::overall_pass() const {
    if (checks_.empty()) return false;
    for (const auto& c : checks_)
        if (!c.pass) return false;
    return true;
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks_) {
        nlohmann::json v = std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(nullptr);
        arr.push_back({{"name", c.name},
                       {"value", v},
                       {"tolerance", c.tolerance},
                       {"comparison", comparison_symbol(c.comparison)},
                       {"pass", c.pass},
                       {"anchor", c.anchor}});
    }
    return {{"checks", arr}, {"errors", errors_}, {"overall_pass", overall_pass()}};
}

}  // namespace pwaves::cli
