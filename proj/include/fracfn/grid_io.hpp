#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fracfn/errors.hpp"
#include "fracfn/fracops.hpp"

namespace fracfn {

inline std::string format_number(double x, int precision)
{
    std::ostringstream os;
    os.precision(precision);
    os << x;
    return os.str();
}

// "# comment" line (optional), "t,value" header, then rows.
inline void write_grid_csv(std::ostream& os, const GridSeries& g, int precision = 12, const std::string& comment = {})
{
    if (precision < 6 || precision > 17) throw DomainError("write_grid_csv: precision must lie in [6, 17]");
    if (!comment.empty()) os << "# " << comment << '\n';
    os << "t,value\n";
    const auto t = g.t();
    const auto v = g.values();
    for (std::size_t k = 0; k < g.size(); ++k) os << format_number(t[k], precision) << ',' << format_number(v[k], precision) << '\n';
}

inline GridSeries read_grid_csv(std::istream& is)
{
    std::vector<double> t, v;
    std::string line;
    bool header = false;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw DomainError("read_grid_csv: line " + std::to_string(lineno) + " has no comma");
        try {
            t.push_back(std::stod(line.substr(0, comma)));
            v.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::logic_error&) {
            throw DomainError("read_grid_csv: line " + std::to_string(lineno) + " is not numeric");
        }
    }
    if (!header) throw DomainError("read_grid_csv: missing header");
    return GridSeries(std::move(t), std::move(v));
}

} // namespace fracfn
