#include "alfven/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace alfven::csv {

std::string format(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw std::invalid_argument("csv table needs at least one column");
}

void Table::add_row(std::span<const double> values) {
    if (values.size() != columns_.size()) throw std::invalid_argument("csv row width does not match the header");
    data_.insert(data_.end(), values.begin(), values.end());
}

void Table::add_row(std::initializer_list<double> values) { add_row(std::span<const double>(values.begin(), values.size())); }

void Table::write(std::ostream& os) const {
    const std::size_t w = columns_.size();
    for (std::size_t j = 0; j < w; ++j) os << (j ? "," : "") << columns_[j];
    os << '\n';
    for (std::size_t i = 0; i < rows(); ++i) {
        for (std::size_t j = 0; j < w; ++j) os << (j ? "," : "") << format(at(i, j));
        os << '\n';
    }
}

std::string Table::str() const {
    std::ostringstream os;
    write(os);
    return os.str();
}

}  // namespace alfven::csv
