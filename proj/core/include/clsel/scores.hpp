#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "clsel/dataset.hpp"

namespace clsel {

// Leverage and response cross-leverage scores of [X, y]^T.
struct ScoreSet {
    Eigen::VectorXd leverage;        // l_j = h_jj, j < p
    Eigen::VectorXd cross_leverage;  // c_j = h_{j,p}, coupling with y
    double response_leverage = 0.0;  // h_pp
    std::size_t rank = 0;            // effective rank of [X, y]^T
    // Set when the triangular factor is singular (rank < min(n, p+1)).
    // Scores are still the projector onto the column space.
    bool rank_deficient = false;

    std::size_t p() const { return static_cast<std::size_t>(leverage.size()); }
};

// Relative pivot threshold used to decide the effective rank of an
// m x n matrix: 100 * eps * max(m, n).
double rank_threshold(std::size_t rows, std::size_t cols);

// Orthonormal basis Q ((p+1) x r) of the column space of [X, y]^T from a
// column-pivoted Householder factorization.
Eigen::MatrixXd orthonormal_basis(const AugmentedMatrix& augmented);

// Scores from the row norms of Q and inner products against Q's last
// row. The (p+1) x (p+1) hat matrix is never formed.
ScoreSet compute_scores(const Dataset& dataset);

inline constexpr std::size_t kDefaultDenseHatCap = 2000;

// Full H = Q Q^T. Debug/test oracle only; throws SizeLimit when p > cap.
Eigen::MatrixXd hat_matrix_dense(const Dataset& dataset,
                                 std::size_t cap = kDefaultDenseHatCap);

}  // namespace clsel
