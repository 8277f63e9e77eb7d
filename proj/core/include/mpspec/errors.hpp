#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mpspec {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation point outside the parametric domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid argument or unsupported parameter combination.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Cholesky factorization of a matrix expected to be SPD failed.
class NotSpdError : public Error {
public:
    using Error::Error;
};

/// One step of a parameter-estimation loop.
struct IterationRecord {
    int iteration = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double omega_max = 0.0; ///< largest perturbed frequency with these parameters
    double target = 0.0;    ///< target frequency used to derive them
    std::vector<double> alpha_levels; ///< per-level values (multi-level schemes only)
    std::vector<double> beta_levels;
};

/// Last state of an eigen iteration.
struct LastIterate {
    double value = 0.0;
    Eigen::VectorXd vector;
};

/// Iterative procedure did not reach its tolerance.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& what, LastIterate last = {}, std::vector<IterationRecord> trace = {})
        : Error(what)
        , last_(std::move(last))
        , trace_(std::move(trace))
    {
    }

    /// Last iterate of an eigen iteration (empty vector otherwise).
    [[nodiscard]] const LastIterate& last_iterate() const { return last_; }
    /// Parameter history of an estimation loop (empty otherwise).
    [[nodiscard]] const std::vector<IterationRecord>& trace() const { return trace_; }

private:
    LastIterate last_;
    std::vector<IterationRecord> trace_;
};

/// Parameter estimation hit a singular or degenerate system.
class EstimationError : public Error {
public:
    using Error::Error;
};

/// No interface energy in the top mode: nothing to suppress.
class NoOutlierError : public Error {
public:
    using Error::Error;
};

/// Time step at or above the central-difference stability limit.
class StabilityError : public Error {
public:
    using Error::Error;
};

/// Discrete/analytic mode pairing failed.
class MatchingError : public Error {
public:
    using Error::Error;
};

} // namespace mpspec
