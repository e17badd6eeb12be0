#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "triofm/problems.hpp"
#include "triofm/solver.hpp"

namespace triofm {

/// Key-value configuration file: one `key = value` pair per line, `#` starts
/// a comment, keys are lower-case. Unknown keys are rejected so typos fail
/// fast. The same schema drives problem generation, single solves, and bench
/// ensembles; see the README for the full key list.
class ConfigMap {
  public:
    static ConfigMap parse_file(const std::string& path);
    static ConfigMap parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::string get_string(const std::string& key) const;
    std::string get_string_or(const std::string& key, const std::string& fallback) const;
    long get_long_or(const std::string& key, long fallback) const;
    double get_double_or(const std::string& key, double fallback) const;
    bool get_bool_or(const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& key) const;

    const std::map<std::string, std::string>& values() const { return values_; }
    const std::string& origin() const { return origin_; }

  private:
    std::map<std::string, std::string> values_;
    std::string origin_;
};

enum class ProblemKind { kRandom, kDft, kHubbard, kMatrixFile };

struct ProblemConfig {
    ProblemKind kind = ProblemKind::kRandom;
    SpectrumSpec spectrum;
    DftSpec dft;
    HubbardSpec hubbard;
    std::string matrix_file;
};

struct BuiltProblem {
    SymmetricOperator op;
    std::optional<ReferenceEigen> reference;  // prescribed-spectrum families only
};

ProblemConfig problem_from_config(const ConfigMap& map);
BuiltProblem build_problem(const ProblemConfig& config);

/// Solver settings plus the block width p (p lives beside the solver keys in
/// the file but is not part of SolverConfig).
struct RunSetup {
    SolverConfig solver;
    int p = 5;
};

RunSetup run_setup_from_config(const ConfigMap& map);

struct BenchMethod {
    std::string label;          // e.g. "triofm+cg"
    bool triangularized = true;
    Acceleration acceleration = Acceleration::kCgColumnwise;
    std::optional<bool> locking_override;
};

struct BenchConfig {
    int runs = 20;
    std::vector<BenchMethod> methods;
};

BenchConfig bench_from_config(const ConfigMap& map);
BenchMethod parse_bench_method(const std::string& token);

}  // namespace triofm
