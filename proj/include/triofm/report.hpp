#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace triofm {

/// One solve inside a report. NaN metrics (for instance e_vec for the
/// non-triangularized baselines, which do not produce eigenvectors) are
/// serialized as JSON null.
struct RunRecord {
    std::string method;
    std::uint64_t seed = 0;
    long iterations = 0;
    long column_accesses = 0;
    bool converged = false;
    bool diverged = false;
    double e_vec = 0.0;
    double e_val = 0.0;
    long nnz = -1;  // -1: not measured
    double final_residual = 0.0;
};

struct Aggregate {
    double mean = 0.0;
    double max = 0.0;
    double min = 0.0;
};

Aggregate aggregate_of(const std::vector<double>& values);

struct RunReport {
    std::string version;
    std::map<std::string, std::string> config_echo;
    std::vector<RunRecord> runs;
};

/// Serializes the report: config echo, per-run rows, and per-method
/// mean/max/min aggregates of iterations and column accesses recomputed from
/// the rows.
std::string report_to_json(const RunReport& report);
void write_report(const std::string& path, const RunReport& report);

}  // namespace triofm
