#pragma once

#include <string>
#include <variant>
#include <vector>

namespace sap {

/// Fixed-column text table written as CSV. Numbers are printed with %.10g
/// so repeated runs produce identical bytes.
class Table {
public:
    using Cell = std::variant<double, long long, std::string, bool>;

    explicit Table(std::vector<std::string> columns = {});

    void add_row(std::vector<Cell> cells);
    const std::vector<std::string>& columns() const { return columns_; }
    std::size_t size() const { return rows_.size(); }
    const std::vector<std::string>& row(std::size_t i) const { return rows_.at(i); }

    std::string csv() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

std::string format_number(double v);

}  // namespace sap
