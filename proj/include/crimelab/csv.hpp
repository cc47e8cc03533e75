#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crimelab {

/// Parsed CSV: a header row plus data rows, all cells as strings.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 if absent
};

/// RFC 4180 reader: quoted fields, embedded commas/quotes/newlines, CRLF
/// tolerated, optional UTF-8 BOM stripped. Ragged rows raise DataError.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

std::string csv_escape(const std::string& field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);
void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);

}  // namespace crimelab
