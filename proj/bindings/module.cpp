// Python bindings for the solver's main operations: direction fields, the
// block solve, problem builders, and the accuracy metrics. Dense operators
// cross the boundary as numpy arrays; results come back as plain dicts.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "triofm/linesearch.hpp"
#include "triofm/metrics.hpp"
#include "triofm/problems.hpp"
#include "triofm/solver.hpp"

namespace py = pybind11;
using namespace triofm;

namespace {

Matrix matrix_from_numpy(const py::array_t<double, py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw py::value_error("expected a 2-D array");
    Matrix m(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)));
    auto view = arr.unchecked<2>();
    for (int j = 0; j < m.cols; ++j)
        for (int i = 0; i < m.rows; ++i) m(i, j) = view(i, j);
    return m;
}

py::array_t<double> numpy_from_matrix(const Matrix& m) {
    py::array_t<double> out({m.rows, m.cols});
    auto view = out.mutable_unchecked<2>();
    for (int j = 0; j < m.cols; ++j)
        for (int i = 0; i < m.rows; ++i) view(i, j) = m(i, j);
    return out;
}

SymmetricOperator operator_from_numpy(const py::array_t<double, py::array::forcecast>& arr) {
    Matrix m = matrix_from_numpy(arr);
    if (m.rows != m.cols) throw py::value_error("operator must be square");
    return SymmetricOperator::dense(std::move(m));
}

Objective objective_from_string(const std::string& name) {
    if (name == "obj1") return Objective::kObj1;
    if (name == "obj2") return Objective::kObj2;
    throw py::value_error("objective must be 'obj1' or 'obj2'");
}

ReferenceEigen reference_from_numpy(const py::array_t<double, py::array::forcecast>& eigenvalues,
                                    const py::array_t<double, py::array::forcecast>& vectors) {
    if (eigenvalues.ndim() != 1) throw py::value_error("eigenvalues must be 1-D");
    std::vector<double> vals(eigenvalues.data(), eigenvalues.data() + eigenvalues.shape(0));
    Matrix vecs = matrix_from_numpy(vectors);
    double scale = 0.0;
    for (double v : vals) scale = std::max(scale, std::fabs(v));
    return ReferenceEigen::create(std::move(vals), std::move(vecs), 1e-10 * scale);
}

py::dict solve_dense(const py::array_t<double, py::array::forcecast>& a, int p,
                     const py::kwargs& kwargs) {
    SymmetricOperator op = operator_from_numpy(a);

    SolverConfig config;
    std::uint64_t init_seed = 0;
    for (auto item : kwargs) {
        const std::string key = py::cast<std::string>(item.first);
        if (key == "objective") {
            config.objective = objective_from_string(py::cast<std::string>(item.second));
        } else if (key == "triangularized") {
            config.triangularized = py::cast<bool>(item.second);
        } else if (key == "stepsize") {
            const std::string v = py::cast<std::string>(item.second);
            if (v == "fixed")
                config.stepsize.kind = StepsizeKind::kFixed;
            else if (v == "exact-full")
                config.stepsize.kind = StepsizeKind::kExactFull;
            else if (v == "exact-columnwise")
                config.stepsize.kind = StepsizeKind::kExactColumnwise;
            else
                throw py::value_error("stepsize must be fixed, exact-full, or exact-columnwise");
        } else if (key == "alpha") {
            config.stepsize.alpha = py::cast<double>(item.second);
        } else if (key == "acceleration") {
            const std::string v = py::cast<std::string>(item.second);
            if (v == "none" || v == "gd")
                config.acceleration = Acceleration::kNone;
            else if (v == "momentum")
                config.acceleration = Acceleration::kMomentum;
            else if (v == "cg")
                config.acceleration = Acceleration::kCgColumnwise;
            else
                throw py::value_error("acceleration must be none, momentum, or cg");
        } else if (key == "momentum_beta") {
            config.momentum_beta = py::cast<double>(item.second);
        } else if (key == "tolerance") {
            config.tolerance = py::cast<double>(item.second);
        } else if (key == "max_iterations") {
            config.max_iterations = py::cast<long>(item.second);
        } else if (key == "locking") {
            config.locking_enabled = py::cast<bool>(item.second);
        } else if (key == "stopping") {
            const std::string v = py::cast<std::string>(item.second);
            if (v == "direction-norm")
                config.stopping = Stopping::kDirectionNorm;
            else if (v == "residual")
                config.stopping = Stopping::kResidual;
            else if (v == "either")
                config.stopping = Stopping::kEither;
            else
                throw py::value_error("stopping must be direction-norm, residual, or either");
        } else if (key == "seed") {
            init_seed = py::cast<std::uint64_t>(item.second);
        } else {
            throw py::value_error("unknown solve option: " + key);
        }
    }
    config.record_trace = false;

    BlockVector x0 = random_unit_columns(op.dimension(), p, init_seed);
    SolveResult r = solve(op, std::move(x0), config);

    py::dict out;
    out["x"] = numpy_from_matrix(r.x.values);
    out["ritz_values"] = r.ritz_values;
    out["iterations"] = r.iterations;
    out["column_accesses"] = r.column_accesses;
    out["converged"] = r.converged;
    out["residual"] = r.final_residual;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Triangularized orthogonalization-free block eigensolver";
    m.attr("__version__") = TRIOFM_VERSION;

    m.def(
        "tri_direction_obj1",
        [](const py::array_t<double, py::array::forcecast>& a,
           const py::array_t<double, py::array::forcecast>& x) {
            return numpy_from_matrix(
                tri_direction_obj1(operator_from_numpy(a), matrix_from_numpy(x)));
        },
        py::arg("a"), py::arg("x"),
        "Triangularized direction AX + X triu(X^T X); column i only sees columns 1..i.");
    m.def(
        "tri_direction_obj2",
        [](const py::array_t<double, py::array::forcecast>& a,
           const py::array_t<double, py::array::forcecast>& x) {
            return numpy_from_matrix(
                tri_direction_obj2(operator_from_numpy(a), matrix_from_numpy(x)));
        },
        py::arg("a"), py::arg("x"),
        "Triangularized direction 2AX - AX triu(X^T X) - X triu(X^T A X).");
    m.def(
        "grad_obj1",
        [](const py::array_t<double, py::array::forcecast>& a,
           const py::array_t<double, py::array::forcecast>& x) {
            return numpy_from_matrix(grad_obj1(operator_from_numpy(a), matrix_from_numpy(x)));
        },
        py::arg("a"), py::arg("x"), "Gradient 4AX + 4X X^T X of the residual objective.");
    m.def(
        "grad_obj2",
        [](const py::array_t<double, py::array::forcecast>& a,
           const py::array_t<double, py::array::forcecast>& x) {
            return numpy_from_matrix(grad_obj2(operator_from_numpy(a), matrix_from_numpy(x)));
        },
        py::arg("a"), py::arg("x"), "Gradient of the orbital objective.");
    m.def(
        "eval_obj1",
        [](const py::array_t<double, py::array::forcecast>& a,
           const py::array_t<double, py::array::forcecast>& x) {
            return eval_obj1(operator_from_numpy(a), matrix_from_numpy(x));
        },
        py::arg("a"), py::arg("x"), "trace(2 X^T A X + X^T X X^T X).");
    m.def(
        "eval_obj2",
        [](const py::array_t<double, py::array::forcecast>& a,
           const py::array_t<double, py::array::forcecast>& x) {
            return eval_obj2(operator_from_numpy(a), matrix_from_numpy(x));
        },
        py::arg("a"), py::arg("x"), "trace((2I - X^T X) X^T A X).");

    m.def("solve", &solve_dense, py::arg("a"), py::arg("p"),
          "Run the block iteration on a dense symmetric matrix for the p lowest eigenpairs.\n"
          "Keyword options: objective, triangularized, stepsize, alpha, acceleration,\n"
          "momentum_beta, tolerance, max_iterations, locking, stopping, seed.");

    m.def(
        "build_random",
        [](const std::string& family, int n, std::uint64_t seed, int uniform_scale_n) {
            SpectrumSpec spec;
            spec.n = n;
            spec.seed = seed;
            spec.uniform_scale_n = uniform_scale_n;
            if (family == "uniform")
                spec.family = SpectrumFamily::kUniform;
            else if (family == "logarithm")
                spec.family = SpectrumFamily::kLogarithm;
            else if (family == "ushape")
                spec.family = SpectrumFamily::kUshape;
            else
                throw py::value_error("family must be uniform, logarithm, or ushape");
            RandomMatrixProblem prob = build_random(spec);
            return py::make_tuple(numpy_from_matrix(prob.op.dense_data()),
                                  prob.reference.eigenvalues,
                                  numpy_from_matrix(prob.reference.vectors));
        },
        py::arg("family"), py::arg("n"), py::arg("seed") = 0, py::arg("uniform_scale_n") = 0,
        "Random test matrix with a prescribed spectrum; returns (A, eigenvalues, eigenvectors).");

    m.def(
        "build_dft",
        [](int grid_points) {
            return numpy_from_matrix(build_dft({grid_points}).to_dense(8192));
        },
        py::arg("grid_points") = 500,
        "Periodic four-well Schroedinger operator as a dense array.");

    m.def(
        "build_hubbard",
        [](int lx, int ly, int n_up, int n_dn, double t, double u) {
            HubbardSpec spec{lx, ly, n_up, n_dn, t, u};
            return numpy_from_matrix(build_hubbard(spec, 8192).to_dense(8192));
        },
        py::arg("lx"), py::arg("ly"), py::arg("n_up"), py::arg("n_dn"), py::arg("t") = 1.0,
        py::arg("u") = 4.0,
        "Momentum-space Hubbard Hamiltonian over the determinant basis (dense; small lattices).");

    m.def(
        "fci_dimension",
        [](int lx, int ly, int n_up, int n_dn) {
            HubbardSpec spec{lx, ly, n_up, n_dn, 1.0, 1.0};
            return enumerate_fci_basis(spec).dimension();
        },
        py::arg("lx"), py::arg("ly"), py::arg("n_up"), py::arg("n_dn"),
        "Determinant-basis dimension of the Hubbard problem.");

    m.def(
        "e_vec",
        [](const py::array_t<double, py::array::forcecast>& x,
           const py::array_t<double, py::array::forcecast>& eigenvalues,
           const py::array_t<double, py::array::forcecast>& eigenvectors,
           const std::string& objective) {
            return e_vec(matrix_from_numpy(x), reference_from_numpy(eigenvalues, eigenvectors),
                         objective_from_string(objective));
        },
        py::arg("x"), py::arg("eigenvalues"), py::arg("eigenvectors"),
        py::arg("objective") = "obj1",
        "Relative distance to the nearest global minimizer of the triangularized scheme.");

    m.def(
        "e_val",
        [](const py::array_t<double, py::array::forcecast>& a,
           const py::array_t<double, py::array::forcecast>& x,
           const py::array_t<double, py::array::forcecast>& eigenvalues,
           const py::array_t<double, py::array::forcecast>& eigenvectors) {
            return e_val(operator_from_numpy(a), matrix_from_numpy(x),
                         reference_from_numpy(eigenvalues, eigenvectors));
        },
        py::arg("a"), py::arg("x"), py::arg("eigenvalues"), py::arg("eigenvectors"),
        "Relative trace error of the Rayleigh quotient against the reference eigenvalue sum.");

    m.def(
        "nnz_thresholded",
        [](const py::array_t<double, py::array::forcecast>& x, double threshold) {
            return nnz_thresholded(matrix_from_numpy(x), threshold);
        },
        py::arg("x"), py::arg("threshold") = 1e-5,
        "Entries with magnitude above the threshold.");

    m.def(
        "solve_cubic",
        [](double c3, double c2, double c1, double c0) {
            return solve_cubic_select({c3, c2, c1, c0});
        },
        py::arg("c3"), py::arg("c2"), py::arg("c1"), py::arg("c0"),
        "Stepsize root of a cubic with the exact-linesearch selection rules.");

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);
}
