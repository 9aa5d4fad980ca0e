#include "lmmbic/dataset.hpp"

#include "lmmbic/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <string_view>
#include <unordered_set>

namespace lmmbic {

Dataset::Dataset(std::vector<SubjectBlock> subjects) : subjects_(std::move(subjects)) {
    if (subjects_.empty()) throw std::invalid_argument("dataset has no subjects");
    std::unordered_set<std::string> seen;
    for (const auto& s : subjects_) {
        if (s.y.size() == 0) throw std::invalid_argument("subject '" + s.id + "' has no observations");
        if (s.x.size() != s.y.size()) throw DimensionError("subject '" + s.id + "': x and y lengths differ");
        if (!seen.insert(s.id).second) throw std::invalid_argument("duplicate subject id '" + s.id + "'");
        n_ += s.size();
    }
}

std::size_t Dataset::distinct_c_count() const {
    std::set<double> values;
    for (const auto& s : subjects_) values.insert(s.c);
    return values.size();
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\r' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return fields;
}

double parse_number(std::string_view field, std::string_view column, std::size_t line) {
    double value = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    if (!field.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
        throw ParseError(line, "column '" + std::string(column) + "': not a finite number: '" + std::string(field) + "'");
    }
    return value;
}

struct PendingSubject {
    std::string id;
    std::vector<double> x, y;
    double c = 0.0;

    SubjectBlock finish() const {
        SubjectBlock block;
        block.id = id;
        block.c = c;
        block.x = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
        block.y = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
        return block;
    }
};

}  // namespace

Dataset read_dataset(std::istream& in) {
    static constexpr std::array<std::string_view, 4> kColumns{"subject", "x", "c", "y"};

    std::string line;
    std::size_t line_no = 0;
    std::string_view header;
    while (std::getline(in, line)) {
        ++line_no;
        header = trim(line);
        if (!header.empty()) break;
    }
    if (header.empty()) throw ParseError(0, "empty input: missing header row");

    const char delim = header.find('\t') != std::string_view::npos ? '\t' : ',';
    const auto names = split(header, delim);
    std::array<std::size_t, 4> col{};
    for (std::size_t k = 0; k < kColumns.size(); ++k) {
        std::size_t found = names.size();
        for (std::size_t j = 0; j < names.size(); ++j) {
            if (names[j] == kColumns[k]) found = j;
        }
        if (found == names.size()) throw ParseError(line_no, "missing column '" + std::string(kColumns[k]) + "'");
        col[k] = found;
    }

    std::vector<SubjectBlock> subjects;
    std::unordered_set<std::string> closed;
    PendingSubject current;
    bool open = false;

    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty()) continue;
        const auto fields = split(text, delim);
        if (fields.size() != names.size()) {
            throw ParseError(line_no, "expected " + std::to_string(names.size()) + " fields, found " +
                                          std::to_string(fields.size()));
        }
        const std::string id(fields[col[0]]);
        if (id.empty()) throw ParseError(line_no, "column 'subject': empty id");
        const double x = parse_number(fields[col[1]], "x", line_no);
        const double c = parse_number(fields[col[2]], "c", line_no);
        const double y = parse_number(fields[col[3]], "y", line_no);

        if (!open || id != current.id) {
            if (open) {
                closed.insert(current.id);
                subjects.push_back(current.finish());
            }
            if (closed.contains(id)) throw ParseError(line_no, "rows for subject '" + id + "' are not contiguous");
            current = PendingSubject{id, {}, {}, c};
            open = true;
        } else if (c != current.c) {
            throw ParseError(line_no, "column 'c' varies within subject '" + id + "'");
        }
        current.x.push_back(x);
        current.y.push_back(y);
    }
    if (!open) throw ParseError(line_no, "no data rows");
    subjects.push_back(current.finish());
    return Dataset(std::move(subjects));
}

Dataset read_dataset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open data file '" + path + "'");
    return read_dataset(in);
}

void write_dataset(std::ostream& out, const Dataset& data) {
    const auto old_precision = out.precision(17);
    out << "subject,x,c,y\n";
    for (const auto& s : data.subjects()) {
        for (Eigen::Index j = 0; j < s.y.size(); ++j) {
            out << s.id << ',' << s.x[j] << ',' << s.c << ',' << s.y[j] << '\n';
        }
    }
    out.precision(old_precision);
}

}  // namespace lmmbic
