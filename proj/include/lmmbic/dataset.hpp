#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace lmmbic {

// Observations for one subject: covariate x_ij, subject-level covariate c_i,
// response y_ij, in observation order.
struct SubjectBlock {
    std::string id;
    Eigen::VectorXd x;
    double c = 0.0;
    Eigen::VectorXd y;

    std::size_t size() const noexcept { return static_cast<std::size_t>(y.size()); }
};

/**
 * Stacked longitudinal data with per-subject block structure.
 *
 * Construction validates the invariants: at least one subject, unique ids,
 * every block non-empty with matching x/y lengths.
 */
class Dataset {
public:
    explicit Dataset(std::vector<SubjectBlock> subjects);

    const std::vector<SubjectBlock>& subjects() const noexcept { return subjects_; }
    const SubjectBlock& subject(std::size_t i) const { return subjects_.at(i); }

    // Total observations n.
    std::size_t n() const noexcept { return n_; }
    // Subjects N.
    std::size_t N() const noexcept { return subjects_.size(); }

    std::size_t distinct_c_count() const;

private:
    std::vector<SubjectBlock> subjects_;
    std::size_t n_ = 0;
};

// Delimited text with a header naming `subject`, `x`, `c`, `y` (any order,
// extra columns ignored). Comma or tab separated; rows grouped by subject.
Dataset read_dataset(std::istream& in);
Dataset read_dataset_file(const std::string& path);

void write_dataset(std::ostream& out, const Dataset& data);

}  // namespace lmmbic
