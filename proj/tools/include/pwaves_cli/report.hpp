#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace pwaves::cli {

enum class Comparison { abs_le, le, lt, ge, gt };

struct Check {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    Comparison comparison = Comparison::abs_le;
    bool pass = false;
    std::string anchor;  // the claim this check verifies
};

const char* comparison_symbol(Comparison c);
bool compare(double value, Comparison c, double tolerance);

class VerificationReport {
public:
    // Residual-type check: |value| <= tolerance. The override, when given, replaces the tolerance.
    void add_residual(std::string name, double value, double tolerance, std::string anchor,
                      const double* override_tol = nullptr);
    void add(std::string name, double value, Comparison c, double threshold, std::string anchor);
    // A check whose computation threw: recorded as failed with a NaN value.
    void add_failure(std::string name, std::string anchor, const std::string& error);

    const std::vector<Check>& checks() const { return checks_; }
    const std::vector<std::string>& errors() const { return errors_; }
    bool overall_pass() const;
    nlohmann::json to_json() const;

private:
    std::vector<Check> checks_;
    std::vector<std::string> errors_;
};

}  // namespace pwaves::cli
