#pragma once

#include <stdexcept>
#include <sstream>
#include <string>

namespace pwaves {

// Bad caller input: out-of-range epsilon, inadmissible mu_tilde, amplitude too large.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical stage failed to deliver what was asked of it.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class QuadratureError : public SolverError {
public:
    QuadratureError(const std::string& what, double achieved, double requested)
        : SolverError(format(what, achieved, requested)),
          achieved_(achieved), requested_(requested) {}
    double achieved() const { return achieved_; }
    double requested() const { return requested_; }

private:
    static std::string format(const std::string& what, double achieved, double requested) {
        std::ostringstream os;
        os << what << " (error estimate " << achieved << ", requested " << requested << ")";
        return os.str();
    }
    double achieved_;
    double requested_;
};

class SeriesDivergence : public SolverError {
public:
    SeriesDivergence(const std::string& what, int index)
        : SolverError(what + " (at coefficient " + std::to_string(index) + ")"), index_(index) {}
    int index() const { return index_; }

private:
    int index_;
};

}  // namespace pwaves
