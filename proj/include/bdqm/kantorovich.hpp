#ifndef BDQM_KANTOROVICH_HPP
#define BDQM_KANTOROVICH_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "bdqm/spaces.hpp"

namespace bdqm {

struct SolverParams {
    int restarts = 16;
    int iterations = 400;
    double step_decay = 0.98;
    double initial_step = 0.5;
    std::uint64_t seed = 1;
    double degenerate_tol = 1e-12;
    // slack granted to solver-derived inequalities (triangle checks etc.)
    double tolerance = 5e-2;
};

struct KantorovichResult {
    double value = 0.0;        // certified lower bound of the supremum
    RealVector maximizer;      // achieving element, normalized to lip = 1
    double restart_spread = 0.0;
    bool degenerate = false;
};

// sup{ |phi(a) - psi(a)| : lip(a) <= 1 } estimated from below by multi-start
// projected subgradient ascent on the homogeneous ratio over the traceless
// slice.  Every reported value is achieved by a feasible element.
KantorovichResult kantorovich(const QMSpace& space, const StateFunctional& phi,
                              const StateFunctional& psi, const SolverParams& params);

// Exact Wasserstein-1 distance between probability vectors on a finite metric
// space, solved as a min-cost transportation problem by successive shortest
// paths.  Brute-force oracle for the iterative engine; |X| <= 64.
double kantorovich_exact_finite(const Eigen::MatrixXd& distances, const RealVector& mu,
                                const RealVector& nu);

// Hausdorff distance between finite sets A (indices 0..na-1) and B given a
// pairwise metric evaluator.
double hausdorff(const std::function<double(int, int)>& metric, int na, int nb);

// All pairwise engine distances between net states (parallel kernel).
Eigen::MatrixXd kantorovich_matrix(const QMSpace& space, const std::vector<StateFunctional>& a,
                                   const std::vector<StateFunctional>& b,
                                   const SolverParams& params);

}  // namespace bdqm

#endif
