#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>

namespace lmmbic {

struct NelderMeadOptions {
    int max_iterations = 2000;
    double rel_tolerance = 1e-8;
    // Coordinates are clamped to this lower bound (projection).
    double lower_bound = -std::numeric_limits<double>::infinity();
    double initial_step = 1.0;
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = std::numeric_limits<double>::infinity();
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

/**
 * Minimizes f by the Nelder-Mead simplex method with standard coefficients
 * (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
 *
 * Non-finite objective values are treated as +infinity. Convergence: over a
 * full cycle of dim+1 iterations the best value improves by less than
 * rel_tolerance * max(1, |f_best|), and the spread of values across the
 * simplex is within the same bound.
 */
NelderMeadResult nelder_mead_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                                      const Eigen::VectorXd& start, const NelderMeadOptions& options);

}  // namespace lmmbic
