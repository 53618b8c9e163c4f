#include "clsel/dataset.hpp"

#include <cmath>
#include <sstream>
#include <unordered_set>

#include "clsel/error.hpp"

namespace clsel {

namespace {

double max_code(Encoding encoding) {
    return encoding == Encoding::binary ? 1.0 : 2.0;
}

}  // namespace

Dataset::Dataset(Eigen::MatrixXd x, Eigen::VectorXd y,
                 std::vector<std::string> variable_names, Encoding encoding)
    : x_(std::move(x)), y_(std::move(y)), names_(std::move(variable_names)),
      encoding_(encoding) {
    if (x_.rows() == 0 || x_.cols() == 0) {
        throw InvalidDataset("dataset must have n >= 1 and p >= 1");
    }
    if (y_.size() != x_.rows()) {
        std::ostringstream msg;
        msg << "dimension mismatch: x has " << x_.rows() << " rows but y has "
            << y_.size() << " entries";
        throw InvalidDataset(msg.str());
    }
    const double top = max_code(encoding_);
    for (Eigen::Index j = 0; j < x_.cols(); ++j) {
        for (Eigen::Index i = 0; i < x_.rows(); ++i) {
            const double v = x_(i, j);
            if (!std::isfinite(v) || v < 0.0 || v > top || v != std::floor(v)) {
                std::ostringstream msg;
                msg << "invalid cell x[" << i + 1 << "," << j + 1 << "] = " << v
                    << " (allowed: integers 0.." << top << ")";
                throw InvalidDataset(msg.str());
            }
        }
    }
    for (Eigen::Index i = 0; i < y_.size(); ++i) {
        if (y_(i) != 0.0 && y_(i) != 1.0) {
            std::ostringstream msg;
            msg << "response y[" << i + 1 << "] = " << y_(i) << " is not 0/1";
            throw InvalidDataset(msg.str());
        }
    }
    if (!names_.empty()) {
        if (names_.size() != p()) {
            throw InvalidDataset("variable_names must have length p");
        }
        std::unordered_set<std::string> seen;
        for (const auto& name : names_) {
            if (!seen.insert(name).second) {
                throw InvalidDataset("duplicate variable name '" + name + "'");
            }
        }
    }
}

std::string Dataset::name(std::size_t j) const {
    if (!names_.empty()) return names_.at(j);
    return "X" + std::to_string(j + 1);
}

std::size_t Dataset::cases() const {
    return static_cast<std::size_t>(y_.sum());
}

bool Dataset::has_both_classes() const {
    const auto ones = cases();
    return ones > 0 && ones < n();
}

void Dataset::require_both_classes() const {
    if (!has_both_classes()) {
        throw InvalidDataset("response must contain at least one 0 and one 1");
    }
}

Dataset Dataset::subset_columns(const std::vector<std::size_t>& columns) const {
    Eigen::MatrixXd sub(x_.rows(), static_cast<Eigen::Index>(columns.size()));
    std::vector<std::string> names;
    if (!names_.empty()) names.reserve(columns.size());
    for (std::size_t k = 0; k < columns.size(); ++k) {
        if (columns[k] >= p()) throw InvalidArgument("column index out of range");
        sub.col(static_cast<Eigen::Index>(k)) = x_.col(static_cast<Eigen::Index>(columns[k]));
        if (!names_.empty()) names.push_back(names_[columns[k]]);
    }
    return Dataset(std::move(sub), y_, std::move(names), encoding_);
}

Dataset Dataset::subset_rows(const std::vector<std::size_t>& rows) const {
    Eigen::MatrixXd sub(static_cast<Eigen::Index>(rows.size()), x_.cols());
    Eigen::VectorXd ysub(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k] >= n()) throw InvalidArgument("row index out of range");
        sub.row(static_cast<Eigen::Index>(k)) = x_.row(static_cast<Eigen::Index>(rows[k]));
        ysub(static_cast<Eigen::Index>(k)) = y_(static_cast<Eigen::Index>(rows[k]));
    }
    return Dataset(std::move(sub), std::move(ysub), names_, encoding_);
}

AugmentedMatrix augment(const Dataset& dataset) {
    const auto n = static_cast<Eigen::Index>(dataset.n());
    const auto p = static_cast<Eigen::Index>(dataset.p());
    AugmentedMatrix out;
    out.rows.resize(p + 1, n);
    out.rows.topRows(p) = dataset.x().transpose();
    out.rows.row(p) = dataset.y().transpose();
    return out;
}

}  // namespace clsel
