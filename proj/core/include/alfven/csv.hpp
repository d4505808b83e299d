#pragma once

#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace alfven::csv {

// Shortest representation that reads back to the same double; "nan", "inf", "-inf"
// for the non-finite values. Independent of the global locale.
std::string format(double v);

// A numeric table with a header line, written with ',' separators and '\n' line ends.
class Table {
public:
    explicit Table(std::vector<std::string> columns);

    void add_row(std::span<const double> values);
    void add_row(std::initializer_list<double> values);

    const std::vector<std::string>& columns() const { return columns_; }
    std::size_t rows() const { return data_.size() / columns_.size(); }
    double at(std::size_t row, std::size_t col) const { return data_[row * columns_.size() + col]; }

    void write(std::ostream& os) const;
    std::string str() const;

private:
    std::vector<std::string> columns_;
    std::vector<double> data_;
};

}  // namespace alfven::csv
