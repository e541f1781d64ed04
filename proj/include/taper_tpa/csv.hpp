#ifndef TAPER_TPA_CSV_HPP
#define TAPER_TPA_CSV_HPP

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "taper_tpa/errors.hpp"

namespace taper_tpa {

/// Named columns of real values; every row has one value per column.
class ResultTable {
public:
    ResultTable() = default;
    explicit ResultTable(std::vector<std::string> columns)
        : columns_(std::move(columns))
    {
    }

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<double>>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }

    void add_row(std::vector<double> row)
    {
        if (row.size() != columns_.size())
            throw domain_error("ResultTable: row has " + std::to_string(row.size()) + " values, expected "
                               + std::to_string(columns_.size()));
        rows_.push_back(std::move(row));
    }

    std::size_t column_index(const std::string& name) const
    {
        for (std::size_t i = 0; i < columns_.size(); ++i)
            if (columns_[i] == name)
                return i;
        throw domain_error("ResultTable: no column named " + name);
    }

    std::vector<double> column(const std::string& name) const
    {
        const std::size_t c = column_index(name);
        std::vector<double> out;
        out.reserve(rows_.size());
        for (const auto& r : rows_)
            out.push_back(r[c]);
        return out;
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

/// 17 significant digits in scientific notation; round-trips exactly.
inline std::string format_csv_value(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

inline void write_csv(const ResultTable& table, std::ostream& sink)
{
    const auto& cols = table.columns();
    for (std::size_t i = 0; i < cols.size(); ++i)
        sink << (i ? "," : "") << cols[i];
    sink << '\n';
    for (const auto& row : table.rows()) {
        for (std::size_t i = 0; i < row.size(); ++i)
            sink << (i ? "," : "") << format_csv_value(row[i]);
        sink << '\n';
    }
    sink.flush();
    if (!sink)
        throw std::runtime_error("write_csv: failed to write to the output sink");
}

inline ResultTable read_csv(std::istream& source)
{
    std::string line;
    if (!std::getline(source, line))
        throw domain_error("read_csv: missing header line");
    std::vector<std::string> cols;
    {
        std::istringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ','))
            cols.push_back(cell);
    }
    ResultTable table(cols);
    while (std::getline(source, line)) {
        if (line.empty())
            continue;
        std::vector<double> row;
        std::istringstream rs(line);
        std::string cell;
        while (std::getline(rs, cell, ','))
            row.push_back(std::strtod(cell.c_str(), nullptr));
        table.add_row(std::move(row));
    }
    return table;
}

} // namespace taper_tpa

#endif // TAPER_TPA_CSV_HPP
