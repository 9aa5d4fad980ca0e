#include "lmmbic/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace lmmbic {

NelderMeadResult nelder_mead_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                                      const Eigen::VectorXd& start, const NelderMeadOptions& options) {
    if (!(options.rel_tolerance > 0.0)) throw std::invalid_argument("rel_tolerance must be positive");
    const Eigen::Index dim = start.size();
    if (dim == 0) throw std::invalid_argument("nothing to optimize");

    NelderMeadResult result;
    auto clamp = [&](Eigen::VectorXd x) {
        x = x.cwiseMax(options.lower_bound);
        return x;
    };
    auto evaluate = [&](const Eigen::VectorXd& x) {
        ++result.evaluations;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    const auto vertices = static_cast<std::size_t>(dim + 1);
    std::vector<Eigen::VectorXd> simplex(vertices);
    std::vector<double> values(vertices);
    simplex[0] = clamp(start);
    for (Eigen::Index k = 0; k < dim; ++k) {
        Eigen::VectorXd v = simplex[0];
        v[k] += options.initial_step;
        simplex[static_cast<std::size_t>(k + 1)] = v;
    }
    for (std::size_t k = 0; k < vertices; ++k) values[k] = evaluate(simplex[k]);

    std::vector<std::size_t> order(vertices);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<Eigen::VectorXd> s(vertices);
        std::vector<double> v(vertices);
        for (std::size_t k = 0; k < vertices; ++k) {
            s[k] = std::move(simplex[order[k]]);
            v[k] = values[order[k]];
        }
        simplex = std::move(s);
        values = std::move(v);
    };

    sort_simplex();
    double cycle_start_best = values.front();
    const int cycle_length = static_cast<int>(dim + 1);

    while (result.iterations < options.max_iterations) {
        ++result.iterations;
        const std::size_t worst = vertices - 1;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
        for (std::size_t k = 0; k < worst; ++k) centroid += simplex[k];
        centroid /= static_cast<double>(dim);

        const Eigen::VectorXd reflected = clamp(centroid + (centroid - simplex[worst]));
        const double f_reflected = evaluate(reflected);

        if (f_reflected < values[0]) {
            const Eigen::VectorXd expanded = clamp(centroid + 2.0 * (centroid - simplex[worst]));
            const double f_expanded = evaluate(expanded);
            if (f_expanded < f_reflected) {
                simplex[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
            }
        } else if (f_reflected < values[worst - 1]) {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
        } else {
            const bool outside = f_reflected < values[worst];
            const Eigen::VectorXd contracted = outside ? clamp(centroid + 0.5 * (reflected - centroid))
                                                       : clamp(centroid + 0.5 * (simplex[worst] - centroid));
            const double f_contracted = evaluate(contracted);
            if (f_contracted < (outside ? f_reflected : values[worst])) {
                simplex[worst] = contracted;
                values[worst] = f_contracted;
            } else {
                for (std::size_t k = 1; k < vertices; ++k) {
                    simplex[k] = clamp(simplex[0] + 0.5 * (simplex[k] - simplex[0]));
                    values[k] = evaluate(simplex[k]);
                }
            }
        }
        sort_simplex();

        if (result.iterations % cycle_length == 0) {
            const double scale = std::max(1.0, std::abs(values.front()));
            const double improvement = cycle_start_best - values.front();
            const double spread = values.back() - values.front();
            if (std::isfinite(values.front()) && improvement <= options.rel_tolerance * scale &&
                spread <= options.rel_tolerance * scale) {
                result.converged = true;
                break;
            }
            cycle_start_best = values.front();
        }
    }

    result.x = simplex.front();
    result.value = values.front();
    return result;
}

}  // namespace lmmbic
