// Tabular results shared by the figure runners and the CLI.
#pragma once

#include <json.hpp>

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace qtraj {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Check {
    std::string name;
    bool passed;
    double value;
    std::string detail;
};

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    std::vector<Check> checks;

    void add_row(std::vector<Cell> row);
    void add_check(std::string name, bool passed, double value, std::string detail = {});
    bool all_passed() const;
    std::size_t column(const std::string& name) const;
    double number(std::size_t row, const std::string& col) const;
};

// Scientific notation with 12 significant digits, independent of the locale.
std::string format_number(double x);

void write_csv(const Table& t, std::ostream& os);
void write_json(const Table& t, std::ostream& os);

}  // namespace qtraj
