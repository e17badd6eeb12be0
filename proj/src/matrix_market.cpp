#include "triofm/matrix_market.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

namespace triofm {

namespace {

void write_value(std::FILE* f, double v) { std::fprintf(f, "%.17g\n", v); }

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_for_write(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "w"));
    if (!f) throw ConfigError("cannot open for writing: " + path);
    return f;
}

}  // namespace

void write_matrix_market(const std::string& path, const Matrix& m) {
    FilePtr f = open_for_write(path);
    std::fprintf(f.get(), "%%%%MatrixMarket matrix array real general\n");
    std::fprintf(f.get(), "%d %d\n", m.rows, m.cols);
    for (int j = 0; j < m.cols; ++j)
        for (int i = 0; i < m.rows; ++i) write_value(f.get(), m(i, j));
}

void write_matrix_market(const std::string& path, const SymmetricOperator& op) {
    const int n = op.dimension();
    switch (op.kind()) {
        case OperatorKind::kDense:
            write_matrix_market(path, op.dense_data());
            return;
        case OperatorKind::kDiagonal: {
            FilePtr f = open_for_write(path);
            std::fprintf(f.get(), "%%%%MatrixMarket matrix coordinate real symmetric\n");
            std::fprintf(f.get(), "%d %d %d\n", n, n, n);
            for (int i = 0; i < n; ++i) {
                std::fprintf(f.get(), "%d %d %.17g\n", i + 1, i + 1,
                             op.diagonal_data()[static_cast<std::size_t>(i)]);
            }
            return;
        }
        case OperatorKind::kSparseCsr: {
            // Lower triangle only, per the symmetric qualifier.
            const auto& rp = op.csr_row_ptr();
            const auto& ci = op.csr_col_idx();
            const auto& va = op.csr_values();
            long count = 0;
            for (int i = 0; i < n; ++i)
                for (int k = rp[static_cast<std::size_t>(i)]; k < rp[static_cast<std::size_t>(i) + 1]; ++k)
                    if (ci[static_cast<std::size_t>(k)] <= i) ++count;
            FilePtr f = open_for_write(path);
            std::fprintf(f.get(), "%%%%MatrixMarket matrix coordinate real symmetric\n");
            std::fprintf(f.get(), "%d %d %ld\n", n, n, count);
            for (int i = 0; i < n; ++i)
                for (int k = rp[static_cast<std::size_t>(i)]; k < rp[static_cast<std::size_t>(i) + 1]; ++k)
                    if (ci[static_cast<std::size_t>(k)] <= i)
                        std::fprintf(f.get(), "%d %d %.17g\n", i + 1,
                                     ci[static_cast<std::size_t>(k)] + 1,
                                     va[static_cast<std::size_t>(k)]);
            return;
        }
        case OperatorKind::kProcedural:
            throw ConfigError("cannot export a procedural operator to Matrix Market");
    }
}

namespace {

struct MmHeader {
    bool coordinate = false;
    bool symmetric = false;
};

MmHeader parse_header(std::istream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty Matrix Market file: " + path);
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || object != "matrix")
        throw ConfigError("not a Matrix Market matrix file: " + path);
    MmHeader h;
    if (format == "coordinate")
        h.coordinate = true;
    else if (format != "array")
        throw ConfigError("unsupported Matrix Market format in " + path);
    if (field != "real" && field != "integer")
        throw ConfigError("unsupported Matrix Market field in " + path);
    if (symmetry == "symmetric")
        h.symmetric = true;
    else if (symmetry != "general")
        throw ConfigError("unsupported Matrix Market symmetry in " + path);
    return h;
}

std::string next_data_line(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        const auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '%') continue;
        return line;
    }
    return {};
}

}  // namespace

Matrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open: " + path);
    const MmHeader h = parse_header(in, path);
    std::istringstream sizes(next_data_line(in));
    int rows = 0, cols = 0;
    long nnz = 0;
    if (h.coordinate) {
        if (!(sizes >> rows >> cols >> nnz)) throw ConfigError("bad size line in " + path);
    } else {
        if (!(sizes >> rows >> cols)) throw ConfigError("bad size line in " + path);
    }
    if (rows <= 0 || cols <= 0) throw ConfigError("bad dimensions in " + path);
    Matrix m(rows, cols);
    if (h.coordinate) {
        for (long k = 0; k < nnz; ++k) {
            std::istringstream ls(next_data_line(in));
            int i = 0, j = 0;
            double v = 0.0;
            if (!(ls >> i >> j >> v)) throw ConfigError("bad coordinate entry in " + path);
            if (i < 1 || i > rows || j < 1 || j > cols)
                throw ConfigError("coordinate entry out of range in " + path);
            m(i - 1, j - 1) = v;
            if (h.symmetric && i != j) m(j - 1, i - 1) = v;
        }
    } else {
        // Array format stores the full column-major block; symmetric array
        // files store the lower triangle column by column.
        if (h.symmetric) {
            for (int j = 0; j < cols; ++j)
                for (int i = j; i < rows; ++i) {
                    std::istringstream ls(next_data_line(in));
                    double v = 0.0;
                    if (!(ls >> v)) throw ConfigError("bad array entry in " + path);
                    m(i, j) = v;
                    m(j, i) = v;
                }
        } else {
            for (int j = 0; j < cols; ++j)
                for (int i = 0; i < rows; ++i) {
                    std::istringstream ls(next_data_line(in));
                    double v = 0.0;
                    if (!(ls >> v)) throw ConfigError("bad array entry in " + path);
                    m(i, j) = v;
                }
        }
    }
    return m;
}

SymmetricOperator read_operator_matrix_market(const std::string& path) {
    std::ifstream probe(path);
    if (!probe) throw ConfigError("cannot open: " + path);
    const MmHeader h = parse_header(probe, path);
    probe.close();

    Matrix m = read_matrix_market(path);
    if (m.rows != m.cols) throw ConfigError("operator file must be square: " + path);
    if (!h.coordinate) return SymmetricOperator::dense(std::move(m));

    // Rebuild CSR from the dense staging copy (file sizes here are moderate).
    const int n = m.rows;
    std::vector<int> row_ptr(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> col_idx;
    std::vector<double> values;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            if (m(i, j) != 0.0) {
                col_idx.push_back(j);
                values.push_back(m(i, j));
            }
        row_ptr[static_cast<std::size_t>(i) + 1] = static_cast<int>(col_idx.size());
    }
    return SymmetricOperator::csr(n, std::move(row_ptr), std::move(col_idx), std::move(values));
}

}  // namespace triofm
