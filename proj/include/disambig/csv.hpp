#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace disambig::csv {

struct Row {
    std::size_t line_no = 0;
    std::vector<std::string> fields;
};

// Splits one CSV line into fields. Supports RFC 4180 quoting ("" escapes a
// quote inside a quoted field); embedded newlines are not supported.
std::vector<std::string> parse_line(const std::string& line, std::size_t line_no);

// Reads all rows from a stream, skipping blank lines.
std::vector<Row> read_all(std::istream& in);

// Quotes a field if it contains a comma, quote, or newline.
std::string escape(const std::string& field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace disambig::csv
