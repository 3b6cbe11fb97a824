#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pacflab/common.hpp"

namespace pacflab {

/// Round-trip decimal formatting: 17 significant digits reproduce the exact
/// binary double on read-back, so CSV outputs double as comparison oracles.
inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

/// Minimal CSV cell escaping; column names and verdict strings never need it,
/// but file paths echoed into tables might.
inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        out += ch;
    }
    out += '"';
    return out;
}

/// An in-memory table with a fixed header, rendered as comma-separated,
/// LF-terminated text. Cells are stored as strings; numeric helpers apply
/// the 17-digit round-trip format.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
        if (header_.empty()) throw std::invalid_argument("CsvTable: header must be non-empty");
    }

    class Row {
    public:
        explicit Row(std::size_t width) { cells_.reserve(width); }
        Row& num(double x) {
            cells_.push_back(format_g17(x));
            return *this;
        }
        Row& idx(std::size_t n) {
            cells_.push_back(std::to_string(n));
            return *this;
        }
        Row& idx(int n) {
            cells_.push_back(std::to_string(n));
            return *this;
        }
        Row& text(std::string s) {
            cells_.push_back(csv_escape(std::move(s)));
            return *this;
        }
        std::vector<std::string> take() { return std::move(cells_); }

    private:
        std::vector<std::string> cells_;
    };

    Row row() const { return Row(header_.size()); }

    void push(Row r) {
        auto cells = r.take();
        if (cells.size() != header_.size())
            throw std::invalid_argument("CsvTable: row has " + std::to_string(cells.size()) +
                                        " cells, header has " + std::to_string(header_.size()));
        rows_.push_back(std::move(cells));
    }

    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

    void write(std::ostream& os) const {
        write_line(os, header_);
        for (const auto& r : rows_) write_line(os, r);
    }

    /// Writes in binary mode so line endings are LF on every platform.
    void write_file(const std::string& path) const {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw config_error("cannot open output file: " + path);
        write(os);
        os.flush();
        if (!os) throw config_error("failed writing output file: " + path);
    }

private:
    static void write_line(std::ostream& os, const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << cells[i];
        }
        os << '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace pacflab
