#include "triofm/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "triofm/types.hpp"

namespace triofm {

Aggregate aggregate_of(const std::vector<double>& values) {
    Aggregate a;
    if (values.empty()) return a;
    a.mean = 0.0;
    a.max = values.front();
    a.min = values.front();
    for (double v : values) {
        a.mean += v;
        a.max = std::max(a.max, v);
        a.min = std::min(a.min, v);
    }
    a.mean /= static_cast<double>(values.size());
    return a;
}

namespace {

nlohmann::json nullable(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

nlohmann::json aggregate_json(const Aggregate& a) {
    return {{"mean", a.mean}, {"max", a.max}, {"min", a.min}};
}

}  // namespace

std::string report_to_json(const RunReport& report) {
    nlohmann::json j;
    j["version"] = report.version;
    j["config"] = report.config_echo;

    nlohmann::json runs = nlohmann::json::array();
    for (const RunRecord& r : report.runs) {
        nlohmann::json run;
        run["method"] = r.method;
        run["seed"] = r.seed;
        run["iterations"] = r.iterations;
        run["column_accesses"] = r.column_accesses;
        run["converged"] = r.converged;
        run["diverged"] = r.diverged;
        run["e_vec"] = nullable(r.e_vec);
        run["e_val"] = nullable(r.e_val);
        if (r.nnz >= 0) run["nnz"] = r.nnz;
        run["final_residual"] = nullable(r.final_residual);
        runs.push_back(std::move(run));
    }
    j["runs"] = std::move(runs);

    std::set<std::string> methods;
    for (const RunRecord& r : report.runs) methods.insert(r.method);
    nlohmann::json aggregates;
    for (const std::string& method : methods) {
        std::vector<double> iters, accesses;
        for (const RunRecord& r : report.runs) {
            if (r.method != method || r.diverged) continue;
            iters.push_back(static_cast<double>(r.iterations));
            accesses.push_back(static_cast<double>(r.column_accesses));
        }
        aggregates[method] = {{"iterations", aggregate_json(aggregate_of(iters))},
                              {"column_accesses", aggregate_json(aggregate_of(accesses))}};
    }
    j["aggregates"] = std::move(aggregates);
    return j.dump(2);
}

void write_report(const std::string& path, const RunReport& report) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open report file for writing: " + path);
    out << report_to_json(report) << "\n";
}

}  // namespace triofm
