#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace wavg {

enum class OutputFormat { csv, markdown };

OutputFormat parse_output_format(const std::string& name);  // "csv" | "md"

/// RFC-4180-style quoting: fields containing commas, quotes or newlines are
/// quoted, with embedded quotes doubled.
std::string csv_escape(const std::string& field);

/// Deterministic decimal rendering; infinities become "-inf"/"inf".
std::string format_double(double value, int precision = 12);
std::string format_fixed(double value, int decimals);

/// A table plus the resolved configuration that produced it.  The meta block
/// is written as leading `# key = value` lines so a run can be reproduced
/// from the file alone.
struct TableDoc {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_meta(const std::string& key, const std::string& value);
    void add_meta(const std::string& key, double value);
    void add_meta(const std::string& key, std::int64_t value);
    void add_meta(const std::string& key, std::uint64_t value);
};

void write_table(std::ostream& out, const TableDoc& doc, OutputFormat format);

/// Several tables in one file, separated by blank lines.
void write_tables(std::ostream& out, const std::vector<TableDoc>& docs, OutputFormat format);
void write_tables_file(const std::string& path, const std::vector<TableDoc>& docs,
                       OutputFormat format);

}  // namespace wavg
