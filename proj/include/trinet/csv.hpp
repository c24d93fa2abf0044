// =========================
// csv.hpp
//
// Deterministic CSV emission (9 significant digits, '.' decimal point,
// ',' separator, '\n' line endings, header always present) and gnuplot
// script generation for the standard table kinds.
// =========================
#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace trinet {

inline std::string fmt_num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::vector<std::string>& add_row() { return rows.emplace_back(); }

    void write(std::ostream& out) const {
        write_line(out, header);
        for (const auto& r : rows) write_line(out, r);
    }

private:
    static void write_line(std::ostream& out, const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out.put(',');
            out << fields[i];
        }
        out.put('\n');
    }
};

enum class PlotKind { lines, region, histogram };

/// Self-contained gnuplot script referencing the CSV by (relative) path.
/// lines: column 1 is the x axis, one series per remaining numeric column.
/// region: scatter of columns 1-2 colored by the last (categorical code) column.
/// histogram: bars of column 2 over the bucket labels in column 1.
inline std::string plot_script(const CsvTable& table, PlotKind kind, const std::string& csv_path) {
    std::string s;
    s += "# gnuplot script, generated alongside " + csv_path + "\n";
    s += "set datafile separator ','\n";
    s += "set key outside\n";
    switch (kind) {
        case PlotKind::lines: {
            s += "set logscale x\n";
            s += "set xlabel '" + (table.header.empty() ? std::string("x") : table.header[0]) + "'\n";
            s += "plot \\\n";
            for (std::size_t c = 1; c < table.header.size(); ++c) {
                s += "  '" + csv_path + "' skip 1 using 1:" + std::to_string(c + 1) +
                     " with lines title '" + table.header[c] + "'";
                s += (c + 1 < table.header.size()) ? ", \\\n" : "\n";
            }
            break;
        }
        case PlotKind::region: {
            s += "set logscale xy\n";
            s += "set xlabel '" + table.header[0] + "'\nset ylabel '" + table.header[1] + "'\n";
            s += "set palette maxcolors 4\n";
            s += "plot '" + csv_path + "' skip 1 using 1:2:" + std::to_string(table.header.size()) +
                 " with points pt 7 palette notitle\n";
            break;
        }
        case PlotKind::histogram: {
            s += "set style data histogram\nset style fill solid 0.7\n";
            s += "set xtics rotate by -45\n";
            s += "plot \\\n";
            for (std::size_t c = 1; c < table.header.size(); ++c) {
                s += "  '" + csv_path + "' skip 1 using " + std::to_string(c + 1) +
                     ":xtic(1) title '" + table.header[c] + "'";
                s += (c + 1 < table.header.size()) ? ", \\\n" : "\n";
            }
            break;
        }
    }
    return s;
}

} // namespace trinet
