#pragma once

#include <stdexcept>
#include <string>

namespace mfou {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// argument outside the parameter domain (alpha <= 0, H outside its interval, ...)
class DomainError : public Error {
public:
    using Error::Error;
};

// kernel evaluated at its pole (tau = 0, lambda = 0, z on the real axis)
class SingularArgument : public Error {
public:
    using Error::Error;
};

class EmbeddingFailure : public Error {
public:
    EmbeddingFailure(const std::string& msg, double min_eig)
        : Error(msg), min_eigenvalue(min_eig) {}
    double min_eigenvalue;
};

class AccuracyError : public Error {
public:
    AccuracyError(const std::string& msg, double est, double err)
        : Error(msg), estimate(est), error_bound(err) {}
    double estimate;
    double error_bound;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class DegenerateData : public Error {
public:
    using Error::Error;
};

class ConditioningError : public Error {
public:
    ConditioningError(const std::string& msg, double cond)
        : Error(msg), condition(cond) {}
    double condition;
};

// Fisher matrix not positive definite
class DegenerateInformation : public Error {
public:
    using Error::Error;
};

class HarnessError : public Error {
public:
    using Error::Error;
};

}  // namespace mfou
