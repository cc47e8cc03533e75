#include "crimelab/csv.hpp"

#include <fstream>
#include <sstream>

#include "crimelab/common.hpp"

namespace crimelab {

int CsvTable::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

namespace {

// Reads one record (which may span physical lines inside quotes).
// Returns false on clean EOF with no data.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string cell;
    bool in_quotes = false;
    bool saw_any = false;
    int c;
    while ((c = in.get()) != EOF) {
        saw_any = true;
        char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get();
                    cell.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                cell.push_back(ch);
            }
        } else if (ch == '"') {
            in_quotes = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cell));
            cell.clear();
        } else if (ch == '\r') {
            if (in.peek() == '\n') in.get();
            fields.push_back(std::move(cell));
            return true;
        } else if (ch == '\n') {
            fields.push_back(std::move(cell));
            return true;
        } else {
            cell.push_back(ch);
        }
    }
    if (in_quotes) throw DataError("unterminated quoted field at end of input");
    if (!saw_any) return false;
    fields.push_back(std::move(cell));
    return true;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
    // Strip a UTF-8 BOM if present.
    if (in.peek() == 0xEF) {
        char bom[3];
        in.read(bom, 3);
        if (in.gcount() != 3 || bom[1] != char(0xBB) || bom[2] != char(0xBF)) {
            throw DataError("malformed byte order mark");
        }
    }
    CsvTable table;
    if (!read_record(in, table.header)) throw DataError("empty csv input");
    std::vector<std::string> fields;
    size_t line = 1;
    while (read_record(in, fields)) {
        ++line;
        if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
        if (fields.size() != table.header.size()) {
            throw DataError("row " + std::to_string(line) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(fields));
        fields.clear();
    }
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    return read_csv(in);
}

std::string csv_escape(const std::string& field) {
    bool needs_quotes = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(',');
        out << csv_escape(fields[i]);
    }
    out.put('\n');
}

void write_csv(std::ostream& out, const CsvTable& table) {
    write_csv_row(out, table.header);
    for (const auto& row : table.rows) write_csv_row(out, row);
}

void write_csv_file(const std::string& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    write_csv(out, table);
}

}  // namespace crimelab
