#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace clsel {

// Admissible cell alphabet of the design matrix.
enum class Encoding {
    binary,   // {0, 1}
    ternary,  // {0, 1, 2}, additive genotype coding
};

// n x p design matrix of small non-negative integer codes plus a binary
// response. Immutable once constructed; the constructor validates every
// invariant and throws InvalidDataset on violation.
class Dataset {
public:
    Dataset(Eigen::MatrixXd x, Eigen::VectorXd y,
            std::vector<std::string> variable_names = {},
            Encoding encoding = Encoding::ternary);

    std::size_t n() const { return static_cast<std::size_t>(x_.rows()); }
    std::size_t p() const { return static_cast<std::size_t>(x_.cols()); }

    const Eigen::MatrixXd& x() const { return x_; }
    const Eigen::VectorXd& y() const { return y_; }
    Encoding encoding() const { return encoding_; }

    bool has_names() const { return !names_.empty(); }
    const std::vector<std::string>& variable_names() const { return names_; }
    // Name of variable j (0-based); synthesised as "X<j+1>" when unnamed.
    std::string name(std::size_t j) const;

    std::size_t cases() const;
    bool has_both_classes() const;
    // Throws InvalidDataset unless y contains at least one 0 and one 1.
    void require_both_classes() const;

    // New dataset restricted to the given columns, in the given order.
    Dataset subset_columns(const std::vector<std::size_t>& columns) const;
    // New dataset made of the given rows (repeats allowed, e.g. bootstrap).
    Dataset subset_rows(const std::vector<std::size_t>& rows) const;

private:
    Eigen::MatrixXd x_;
    Eigen::VectorXd y_;
    std::vector<std::string> names_;
    Encoding encoding_;
};

// [X, y]^T: row j < p is variable j across observations, row p is y.
struct AugmentedMatrix {
    Eigen::MatrixXd rows;
};

AugmentedMatrix augment(const Dataset& dataset);

}  // namespace clsel
