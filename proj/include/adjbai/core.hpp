#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace adjbai {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied data that violates a documented precondition.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// An iterative numerical routine failed to terminate or lost accuracy.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// A matrix that must be positive definite is (numerically) singular.
class SingularMatrix : public NumericalFailure {
public:
    SingularMatrix(const std::string& what, double min_eigenvalue)
        : NumericalFailure(what + " (min eigenvalue " + std::to_string(min_eigenvalue) + ")"),
          min_eigenvalue_(min_eigenvalue) {}

    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

/// A finite arm collection in R^d whose linear span is the whole space.
///
/// Arms are deduplicated on construction with exact coordinate equality; the
/// first occurrence wins and keeps its relative order.
class ArmSet {
public:
    ArmSet() = default;

    /// Throws InvalidInput when fewer than two distinct arms remain, when the
    /// rows have inconsistent length, or when the arms do not span R^d.
    explicit ArmSet(std::vector<Vector> arms);

    static ArmSet from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const noexcept { return arms_.size(); }
    int dim() const noexcept { return dim_; }
    const Vector& operator[](std::size_t i) const { return arms_[i]; }
    const std::vector<Vector>& arms() const noexcept { return arms_; }
    std::size_t duplicates_dropped() const noexcept { return duplicates_dropped_; }

    /// K x d matrix with one arm per row.
    Matrix as_matrix() const;
    double max_norm() const;

private:
    std::vector<Vector> arms_;
    int dim_ = 0;
    std::size_t duplicates_dropped_ = 0;
};

/// Rank of a set of row vectors using a column-pivoted QR with a relative
/// threshold.
int numerical_rank(const Matrix& rows, double rel_tol = 1e-10);

}  // namespace adjbai
