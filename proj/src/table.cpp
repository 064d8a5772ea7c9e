#include "qtraj/table.hpp"

#include "qtraj/error.hpp"

#include <charconv>
#include <cmath>

namespace qtraj {

void Table::add_row(std::vector<Cell> row) {
    require(row.size() == columns.size(), ErrorKind::InvalidArgument, "row width does not match the header");
    rows.push_back(std::move(row));
}

void Table::add_check(std::string n, bool passed, double value, std::string detail) {
    checks.push_back({std::move(n), passed, value, std::move(detail)});
}

bool Table::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

std::size_t Table::column(const std::string& n) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == n) return i;
    fail(ErrorKind::InvalidArgument, "no column named " + n);
}

double Table::number(std::size_t row, const std::string& col) const {
    const Cell& c = rows.at(row).at(column(col));
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    fail(ErrorKind::InvalidArgument, "column " + col + " is not numeric");
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) x = 0.0;  // drop the sign of negative zero
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 11);
    return std::string(buf, res.ptr);
}

namespace {

std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) {
        // JSON has no NaN or infinity; keep the formatted text instead.
        if (!std::isfinite(*d)) return format_number(*d);
        return nlohmann::ordered_json::parse(format_number(*d));
    }
    if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
    return std::get<std::string>(c);
}

}  // namespace

void write_csv(const Table& t, std::ostream& os) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
        os << '\n';
    }
}

void write_json(const Table& t, std::ostream& os) {
    nlohmann::ordered_json j;
    j["config"] = t.config;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = cell_json(row[i]);
        j["rows"].push_back(std::move(r));
    }
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : t.checks) {
        nlohmann::ordered_json cj;
        cj["name"] = c.name;
        cj["passed"] = c.passed;
        cj["value"] = cell_json(Cell{c.value});
        if (!c.detail.empty()) cj["detail"] = c.detail;
        j["checks"].push_back(std::move(cj));
    }
    os << j.dump(2) << '\n';
}

}  // namespace qtraj
