#pragma once

#include <optional>
#include <string>
#include <vector>

namespace lmmbic {

// Balanced simulation design: N subjects with n_sub observations each on a
// shared grid over [0, 10].
struct SimulationDesign {
    char label = 'a';
    int N = 20;
    int n_sub = 5;

    friend bool operator==(const SimulationDesign&, const SimulationDesign&) = default;
};

// The four designs of the study: a(20,5) b(20,100) c(100,5) d(100,100).
std::optional<SimulationDesign> design_from_label(char label);
std::vector<SimulationDesign> parse_design_list(const std::string& labels);

}  // namespace lmmbic
