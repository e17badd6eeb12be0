#include "triofm/trace_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace triofm {

const char* const kTraceCsvHeader =
    "iteration,col_index,g_norm,err_norm,alpha,locked,cum_col_access,residual";

namespace {

void write_field(std::FILE* f, double v, bool trailing_comma) {
    if (std::isfinite(v))
        std::fprintf(f, "%.17g", v);
    // NaN -> empty field.
    if (trailing_comma) std::fputc(',', f);
}

void write_row(std::FILE* f, const TraceRow& row) {
    std::fprintf(f, "%ld,%d,", row.iteration, row.col_index);
    write_field(f, row.g_norm, true);
    write_field(f, row.err_norm, true);
    write_field(f, row.alpha, true);
    std::fprintf(f, "%d,%ld,", row.locked ? 1 : 0, row.cum_col_access);
    write_field(f, row.residual, false);
    std::fputc('\n', f);
}

}  // namespace

TraceCsvWriter::TraceCsvWriter(const std::string& path) : file_(std::fopen(path.c_str(), "w")) {
    if (!file_) throw ConfigError("cannot open trace file for writing: " + path);
    std::fprintf(file_.get(), "%s\n", kTraceCsvHeader);
}

void TraceCsvWriter::operator()(const TraceRow& row) { write_row(file_.get(), row); }

void write_trace_csv(const std::string& path, const ConvergenceTrace& trace) {
    TraceCsvWriter writer(path);
    for (const TraceRow& row : trace.rows) writer(row);
}

ConvergenceTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open trace file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty trace file: " + path);
    if (line.find("iteration") != 0) throw ConfigError("unexpected trace header in " + path);

    ConvergenceTrace trace;
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string field;
        TraceRow row;
        auto next = [&]() {
            if (!std::getline(ls, field, ',')) field.clear();
            return field;
        };
        try {
            row.iteration = std::stol(next());
            row.col_index = std::stoi(next());
            row.g_norm = next().empty() ? nan : std::stod(field);
            row.err_norm = next().empty() ? nan : std::stod(field);
            row.alpha = next().empty() ? nan : std::stod(field);
            row.locked = std::stoi(next()) != 0;
            row.cum_col_access = std::stol(next());
            row.residual = next().empty() ? nan : std::stod(field);
        } catch (const std::exception&) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed trace row");
        }
        trace.rows.push_back(row);
    }
    return trace;
}

}  // namespace triofm
