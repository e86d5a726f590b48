#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracfn/errors.hpp"
#include "fracfn/grid_io.hpp"

namespace fracfn::cli {

enum class Format { csv, json };

struct OutputSpec {
    Format format = Format::csv;
    std::string path; // empty: stdout
    int precision = 12;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// first line of every csv file and the "command" field of json output
class Provenance {
public:
    Provenance(int argc, char** argv)
    {
        text_ = "fracfn";
        for (int i = 1; i < argc; ++i) text_ += std::string(" ") + argv[i];
    }
    const std::string& text() const { return text_; }

private:
    std::string text_;
};

inline double rounded(double x, int precision) { return std::strtod(format_number(x, precision).c_str(), nullptr); }

inline void write_csv(std::ostream& os, const Table& t, int precision, const std::string& provenance)
{
    os << "# " << provenance << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_number(row[c], precision);
        os << '\n';
    }
}

inline nlohmann::json number(double x, int precision)
{
    if (!std::isfinite(x)) return nullptr;
    return rounded(x, precision);
}

inline void write_json(std::ostream& os, const Table& t, int precision, const std::string& provenance)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (double v : row) r.push_back(number(v, precision));
        rows.push_back(std::move(r));
    }
    const nlohmann::json doc{{"command", provenance}, {"columns", t.columns}, {"rows", std::move(rows)}};
    os << doc.dump(2) << '\n';
}

// Parses what write_csv emits: comment line, header, numeric rows.
inline Table read_csv(std::istream& is)
{
    Table t;
    std::string line;
    bool header = false;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::size_t start = 0;
        for (;;) {
            const auto comma = s.find(',', start);
            out.push_back(s.substr(start, comma - start));
            if (comma == std::string::npos) return out;
            start = comma + 1;
        }
    };
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            t.columns = split(line);
            header = true;
            continue;
        }
        std::vector<double> row;
        for (const auto& cell : split(line)) {
            char* end = nullptr;
            row.push_back(std::strtod(cell.c_str(), &end));
            if (end == cell.c_str() || *end != '\0') throw DomainError("read_csv: not a number: " + cell);
        }
        if (row.size() != t.columns.size()) throw DomainError("read_csv: row width differs from header");
        t.rows.push_back(std::move(row));
    }
    return t;
}

class Sink {
public:
    explicit Sink(const std::string& path)
    {
        if (path.empty()) return;
        file_.open(path, std::ios::binary);
        if (!file_) throw DomainError("cannot open output file " + path);
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

inline void emit(const Table& t, const OutputSpec& out, const Provenance& prov)
{
    Sink sink(out.path);
    if (out.format == Format::csv)
        write_csv(sink.stream(), t, out.precision, prov.text());
    else
        write_json(sink.stream(), t, out.precision, prov.text());
}

} // namespace fracfn::cli
