#include "mpspec/csv.hpp"

#include "mpspec/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace mpspec {

std::string format_real(double value)
{
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << value;
    return os.str();
}

std::size_t CsvTable::column_index(const std::string& name) const
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw ArgumentError("CSV has no column '" + name + "'");
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const
{
    const std::size_t c = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        const std::string& s = row[c];
        // from_chars accepts nan and inf; strtod supplies subnormal and
        // overflowing values, which from_chars reports as out of range.
        double v = 0.0;
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || end != s.data() + s.size() ||
            (ec != std::errc() && ec != std::errc::result_out_of_range)) {
            throw ArgumentError("CSV cell '" + s + "' in column '" + name + "' is not a number");
        }
        if (ec == std::errc::result_out_of_range) {
            v = std::strtod(s.c_str(), nullptr);
        }
        out.push_back(v);
    }
    return out;
}

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

} // namespace

CsvTable read_csv(std::istream& in)
{
    CsvTable t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            t.comments.push_back(line.size() > 1 && line[1] == ' ' ? line.substr(2) : line.substr(1));
            continue;
        }
        std::vector<std::string> cells = split(line);
        if (t.header.empty()) {
            t.header = std::move(cells);
        } else {
            if (cells.size() != t.header.size()) {
                throw ArgumentError("CSV line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                    " cells, expected " + std::to_string(t.header.size()));
            }
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

CsvTable read_csv_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ArgumentError("cannot open " + path.string());
    }
    return read_csv(in);
}

CsvWriter::CsvWriter(std::ostream& out)
    : out_(out)
{
}

void CsvWriter::comment(const std::string& line)
{
    out_ << "# " << line << '\n';
}

void CsvWriter::header(const std::vector<std::string>& columns)
{
    columns_ = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out_ << (i ? "," : "") << columns[i];
    }
    out_ << '\n';
}

CsvWriter& CsvWriter::cell(double value)
{
    return cell(format_real(value));
}

CsvWriter& CsvWriter::cell(long long value)
{
    return cell(std::to_string(value));
}

CsvWriter& CsvWriter::cell(const std::string& value)
{
    out_ << (current_ ? "," : "") << value;
    ++current_;
    return *this;
}

void CsvWriter::end_row()
{
    if (columns_ != 0 && current_ != columns_) {
        throw ArgumentError("CSV row has " + std::to_string(current_) + " cells, header has " +
                            std::to_string(columns_));
    }
    out_ << '\n';
    current_ = 0;
}

} // namespace mpspec
