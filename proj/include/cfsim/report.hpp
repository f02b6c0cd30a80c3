#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cfsim/errors.hpp"
#include "cfsim/harness.hpp"

namespace cfsim {

struct Verdict {
    std::string criterion;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string notes;
};

/// Boundedness check configuration: tail max over the last half of the run
/// must not exceed `factor` times the max over the middle third.
struct CriteriaSpec {
    std::vector<std::string> columns = {"max_n", "l2_grad_c", "l2_u", "energy_F"};
    double factor = 1.05;
};

struct CsvSeries {
    std::vector<std::string> columns;
    std::map<std::string, std::vector<double>> data;

    const std::vector<double>& column(const std::string& name) const {
        auto it = data.find(name);
        if (it == data.end())
            throw Error(ErrorCode::SCHEMA_ERROR, "missing column '" + name + "'");
        return it->second;
    }
};

inline CsvSeries read_csv_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IO_ERROR, "cannot open CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::SCHEMA_ERROR, "empty CSV: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    CsvSeries series;
    {
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, ',')) {
            series.columns.push_back(col);
            series.data[col];
        }
    }
    // schema check against the documented header
    {
        std::stringstream ss{std::string(kCsvHeader)};
        std::string col;
        while (std::getline(ss, col, ',')) {
            if (series.data.find(col) == series.data.end())
                throw Error(ErrorCode::SCHEMA_ERROR, "missing column '" + col + "' in " + path);
        }
    }
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t idx = 0;
        while (std::getline(ss, cell, ',')) {
            if (idx >= series.columns.size())
                throw Error(ErrorCode::SCHEMA_ERROR,
                            "row " + std::to_string(lineno) + " has too many cells in " + path);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size())
                throw Error(ErrorCode::SCHEMA_ERROR,
                            "row " + std::to_string(lineno) + ": bad number '" + cell + "'");
            series.data[series.columns[idx]].push_back(v);
            ++idx;
        }
        if (idx != series.columns.size())
            throw Error(ErrorCode::SCHEMA_ERROR,
                        "row " + std::to_string(lineno) + " has too few cells in " + path);
    }
    return series;
}

namespace detail {

inline double window_max(const std::vector<double>& t, const std::vector<double>& v, double lo,
                         double hi) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= lo && t[i] <= hi) m = std::max(m, v[i]);
    return m;
}

inline double ls_slope_t(const std::vector<double>& t, const std::vector<double>& v) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        sx += t[i];
        sy += v[i];
        sxx += t[i] * t[i];
        sxy += t[i] * v[i];
    }
    const double denom = m * sxx - sx * sx;
    return denom == 0.0 ? 0.0 : (m * sxy - sx * sy) / denom;
}

}  // namespace detail

/// Tail-vs-middle boundedness verdicts for each requested column of one run
/// series. measured = tail max, threshold = factor * middle-third max
/// (mirrored for negative middles so "no growth" keeps its meaning).
inline std::vector<Verdict> summarize(const std::string& csv_path, const CriteriaSpec& spec = {}) {
    const CsvSeries series = read_csv_series(csv_path);
    const std::vector<double>& t = series.column("t");
    if (t.empty()) throw Error(ErrorCode::SCHEMA_ERROR, "no data rows in " + csv_path);
    const double t_end = t.back();

    std::vector<Verdict> verdicts;
    for (const std::string& col : spec.columns) {
        const std::vector<double>& v = series.column(col);
        const double mid_max = detail::window_max(t, v, t_end / 3.0, 2.0 * t_end / 3.0);
        const double tail_max = detail::window_max(t, v, t_end / 2.0, t_end);
        Verdict verdict;
        verdict.criterion = "bounded:" + col;
        verdict.measured = tail_max;
        verdict.threshold = mid_max >= 0.0 ? spec.factor * mid_max : mid_max / spec.factor;
        verdict.pass = tail_max <= verdict.threshold;
        if (!verdict.pass) {
            std::vector<double> tt, vv;
            for (std::size_t i = 0; i < t.size(); ++i)
                if (t[i] >= t_end / 3.0) {
                    tt.push_back(t[i]);
                    vv.push_back(v[i]);
                }
            verdict.notes = "slope=" + detail::format_number(detail::ls_slope_t(tt, vv));
        }
        verdicts.push_back(verdict);
    }
    return verdicts;
}

inline void write_verdicts_csv(const std::vector<Verdict>& verdicts, std::ostream& out) {
    out << "criterion,pass,measured,threshold,notes\n";
    for (const Verdict& v : verdicts)
        out << v.criterion << "," << (v.pass ? "true" : "false") << ","
            << detail::format_number(v.measured) << "," << detail::format_number(v.threshold) << ","
            << v.notes << "\n";
}

inline std::string verdicts_table(const std::vector<Verdict>& verdicts) {
    std::ostringstream out;
    for (const Verdict& v : verdicts) {
        out << (v.pass ? "[PASS] " : "[FAIL] ") << v.criterion << "  measured=" << v.measured
            << " threshold=" << v.threshold;
        if (!v.notes.empty()) out << "  " << v.notes;
        out << "\n";
    }
    return out.str();
}

}  // namespace cfsim
