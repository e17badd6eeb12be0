#pragma once

#include <cstdio>
#include <memory>
#include <string>

#include "triofm/solver.hpp"

namespace triofm {

/// Fixed trace CSV schema:
/// iteration,col_index,g_norm,err_norm,alpha,locked,cum_col_access,residual
/// Doubles are written with 17 significant digits; NaN fields are left empty.
extern const char* const kTraceCsvHeader;

/// Streaming writer usable as the solver trace callback.
class TraceCsvWriter {
  public:
    explicit TraceCsvWriter(const std::string& path);
    void operator()(const TraceRow& row);

  private:
    struct Closer {
        void operator()(std::FILE* f) const {
            if (f) std::fclose(f);
        }
    };
    std::unique_ptr<std::FILE, Closer> file_;
};

void write_trace_csv(const std::string& path, const ConvergenceTrace& trace);
ConvergenceTrace read_trace_csv(const std::string& path);

}  // namespace triofm
