#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace mpspec {

/// Reals with 17 significant digits; nan/inf spelled "nan", "inf", "-inf".
std::string format_real(double value);

/// Comma-separated table with '#'-prefixed comment lines before the header.
struct CsvTable {
    std::vector<std::string> comments; ///< without the leading "# "
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::size_t column_index(const std::string& name) const;
    [[nodiscard]] std::vector<double> numeric_column(const std::string& name) const;
};

/// Parses a table written by CsvWriter (no quoting). Throws ArgumentError on
/// ragged rows.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::filesystem::path& path);

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out);

    void comment(const std::string& line);
    void header(const std::vector<std::string>& columns);

    CsvWriter& cell(double value);
    CsvWriter& cell(long long value);
    CsvWriter& cell(int value) { return cell(static_cast<long long>(value)); }
    CsvWriter& cell(std::size_t value) { return cell(static_cast<long long>(value)); }
    CsvWriter& cell(bool value) { return cell(static_cast<long long>(value ? 1 : 0)); }
    CsvWriter& cell(const std::string& value);
    CsvWriter& cell(const char* value) { return cell(std::string(value)); }
    void end_row();

private:
    std::ostream& out_;
    std::size_t columns_ = 0;
    std::size_t current_ = 0;
};

} // namespace mpspec
