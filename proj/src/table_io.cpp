#include "wavg/table_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace wavg {

OutputFormat parse_output_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "md" || name == "markdown") return OutputFormat::markdown;
    throw std::invalid_argument("unknown output format '" + name + "' (expected csv or md)");
}

std::string csv_escape(const std::string& field) {
    const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (const char ch : field) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += '"';
    return out;
}

std::string format_double(double value, int precision) {
    if (std::isinf(value)) return value < 0 ? "-inf" : "inf";
    if (std::isnan(value)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    return buf;
}

std::string format_fixed(double value, int decimals) {
    if (std::isinf(value)) return value < 0 ? "-inf" : "inf";
    if (std::isnan(value)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

void TableDoc::add_meta(const std::string& key, const std::string& value) {
    meta.emplace_back(key, value);
}
void TableDoc::add_meta(const std::string& key, double value) {
    meta.emplace_back(key, format_double(value, 17));
}
void TableDoc::add_meta(const std::string& key, std::int64_t value) {
    meta.emplace_back(key, std::to_string(value));
}
void TableDoc::add_meta(const std::string& key, std::uint64_t value) {
    meta.emplace_back(key, std::to_string(value));
}

namespace {

void write_csv(std::ostream& out, const TableDoc& doc) {
    for (std::size_t i = 0; i < doc.columns.size(); ++i) {
        if (i) out << ',';
        out << csv_escape(doc.columns[i]);
    }
    out << '\n';
    for (const auto& row : doc.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << csv_escape(row[i]);
        }
        out << '\n';
    }
}

void write_markdown(std::ostream& out, const TableDoc& doc) {
    std::vector<std::size_t> widths(doc.columns.size());
    for (std::size_t i = 0; i < doc.columns.size(); ++i) widths[i] = doc.columns[i].size();
    for (const auto& row : doc.rows)
        for (std::size_t i = 0; i < row.size() && i < widths.size(); ++i)
            widths[i] = std::max(widths[i], row[i].size());

    const auto emit_row = [&](const std::vector<std::string>& cells) {
        out << '|';
        for (std::size_t i = 0; i < widths.size(); ++i) {
            const std::string& cell = i < cells.size() ? cells[i] : std::string{};
            out << ' ' << cell << std::string(widths[i] - cell.size(), ' ') << " |";
        }
        out << '\n';
    };
    emit_row(doc.columns);
    out << '|';
    for (const std::size_t w : widths) out << ' ' << std::string(w, '-') << " |";
    out << '\n';
    for (const auto& row : doc.rows) emit_row(row);
}

}  // namespace

void write_table(std::ostream& out, const TableDoc& doc, OutputFormat format) {
    for (const auto& [key, value] : doc.meta) out << "# " << key << " = " << value << '\n';
    if (format == OutputFormat::csv) write_csv(out, doc);
    else write_markdown(out, doc);
}

void write_tables(std::ostream& out, const std::vector<TableDoc>& docs, OutputFormat format) {
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (i) out << '\n';
        write_table(out, docs[i], format);
    }
}

void write_tables_file(const std::string& path, const std::vector<TableDoc>& docs,
                       OutputFormat format) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write output file " + path);
    write_tables(out, docs, format);
}

}  // namespace wavg
