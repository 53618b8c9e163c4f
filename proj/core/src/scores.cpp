#include "clsel/scores.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "clsel/error.hpp"

namespace clsel {

namespace {

// Shared by the score path and the dense path so diag(H) matches the
// leverages bit for bit.
double row_dot(const Eigen::MatrixXd& q, Eigen::Index a, Eigen::Index b) {
    double sum = 0.0;
    for (Eigen::Index k = 0; k < q.cols(); ++k) sum += q(a, k) * q(b, k);
    return sum;
}

}  // namespace

double rank_threshold(std::size_t rows, std::size_t cols) {
    return 100.0 * std::numeric_limits<double>::epsilon() *
           static_cast<double>(std::max(rows, cols));
}

Eigen::MatrixXd orthonormal_basis(const AugmentedMatrix& augmented) {
    const Eigen::MatrixXd& a = augmented.rows;
    const auto m = a.rows();
    const auto n = a.cols();

    if (a.cwiseAbs().maxCoeff() == 0.0) {
        throw RankZero("augmented matrix is identically zero");
    }
    if (a.row(m - 1).cwiseAbs().maxCoeff() == 0.0) {
        throw DegenerateResponse("response row is identically zero");
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(rank_threshold(static_cast<std::size_t>(m), static_cast<std::size_t>(n)));
    const auto r = qr.rank();
    if (r == 0) throw RankZero("augmented matrix has numerical rank 0");

    // Apply the r reflectors to the first r unit vectors: O(m n r), no m x m Q.
    Eigen::MatrixXd q = Eigen::MatrixXd::Identity(m, r);
    auto reflectors = qr.householderQ();
    reflectors.setLength(qr.nonzeroPivots());
    q.applyOnTheLeft(reflectors);
    return q;
}

ScoreSet compute_scores(const Dataset& dataset) {
    const AugmentedMatrix augmented = augment(dataset);
    const Eigen::MatrixXd q = orthonormal_basis(augmented);
    const auto p = static_cast<Eigen::Index>(dataset.p());

    ScoreSet out;
    out.rank = static_cast<std::size_t>(q.cols());
    out.rank_deficient = out.rank < std::min(dataset.n(), dataset.p() + 1);
    out.leverage.resize(p);
    out.cross_leverage.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        out.leverage(j) = row_dot(q, j, j);
        out.cross_leverage(j) = row_dot(q, j, p);
    }
    out.response_leverage = row_dot(q, p, p);
    return out;
}

Eigen::MatrixXd hat_matrix_dense(const Dataset& dataset, std::size_t cap) {
    if (dataset.p() > cap) {
        std::ostringstream msg;
        msg << "dense hat matrix refused: p = " << dataset.p()
            << " exceeds the cap of " << cap;
        throw SizeLimit(msg.str());
    }
    const Eigen::MatrixXd q = orthonormal_basis(augment(dataset));
    const auto m = q.rows();
    Eigen::MatrixXd h(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i; j < m; ++j) {
            h(i, j) = row_dot(q, i, j);
            h(j, i) = h(i, j);
        }
    }
    return h;
}

}  // namespace clsel
