#include "lmmbic/design.hpp"

#include <stdexcept>

namespace lmmbic {

std::optional<SimulationDesign> design_from_label(char label) {
    switch (label) {
        case 'a': return SimulationDesign{'a', 20, 5};
        case 'b': return SimulationDesign{'b', 20, 100};
        case 'c': return SimulationDesign{'c', 100, 5};
        case 'd': return SimulationDesign{'d', 100, 100};
        default: return std::nullopt;
    }
}

std::vector<SimulationDesign> parse_design_list(const std::string& labels) {
    std::vector<SimulationDesign> designs;
    std::size_t start = 0;
    while (start <= labels.size()) {
        const auto comma = labels.find(',', start);
        const auto token = labels.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const auto design = token.size() == 1 ? design_from_label(token[0]) : std::nullopt;
        if (!design) throw std::invalid_argument("invalid design label '" + token + "' (expected a, b, c or d)");
        for (const auto& d : designs) {
            if (d.label == design->label) throw std::invalid_argument("design '" + token + "' listed twice");
        }
        designs.push_back(*design);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return designs;
}

}  // namespace lmmbic
