/// @file error.hpp
/// @brief Exception hierarchy shared by every module.
#pragma once

#include <stdexcept>
#include <string>

namespace couette {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rejected physical input; `violation()` names the broken constraint.
class ParamError : public Error {
public:
    ParamError(std::string violation, const std::string& what)
        : Error(what), violation_(std::move(violation)) {}
    const std::string& violation() const noexcept { return violation_; }

private:
    std::string violation_;
};

class GridError : public Error {
public:
    using Error::Error;
};

/// Density or temperature left the physical range at some node.
class PositivityError : public Error {
public:
    PositivityError(const std::string& what, int i, int j) : Error(what), i_(i), j_(j) {}
    int i() const noexcept { return i_; }
    int j() const noexcept { return j_; }

private:
    int i_;
    int j_;
};

class CflError : public Error {
public:
    CflError(const std::string& what, double acoustic_bound, double viscous_bound)
        : Error(what), acoustic_(acoustic_bound), viscous_(viscous_bound) {}
    double acoustic_bound() const noexcept { return acoustic_; }
    double viscous_bound() const noexcept { return viscous_; }

private:
    double acoustic_;
    double viscous_;
};

class SolveError : public Error {
public:
    using Error::Error;
};

/// Raised by the run loop; wraps the underlying failure with its position in time.
class RunAborted : public Error {
public:
    RunAborted(const std::string& what, double time, long step)
        : Error(what), time_(time), step_(step) {}
    double time() const noexcept { return time_; }
    long step() const noexcept { return step_; }

private:
    double time_;
    long step_;
};

class CheckpointError : public Error {
public:
    enum class Kind { io, bad_magic, version_mismatch, truncated, shape };
    CheckpointError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& key, int line, const std::string& what)
        : Error(what), key_(key), line_(line) {}
    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    std::string key_;
    int line_;
};

}  // namespace couette
