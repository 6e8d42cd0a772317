#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "moc/basis.hpp"
#include "moc/charops.hpp"
#include "moc/exactnum.hpp"
#include "moc/chartable.hpp"
#include "moc/ilp.hpp"
#include "moc/improve.hpp"
#include "moc/intlin.hpp"
#include "moc/session.hpp"

namespace py = pybind11;
using namespace moc;

namespace {

BigInt big(const py::handle& h) { return parse_bigint(py::str(h).cast<std::string>()); }

py::int_ pyint(const BigInt& n) {
    return py::reinterpret_steal<py::int_>(PyLong_FromString(n.get_str().c_str(), nullptr, 10));
}

Vec vec(const py::iterable& v) {
    Vec out;
    for (auto x : v) out.push_back(big(x));
    return out;
}

py::list pylist(const Vec& v) {
    py::list out;
    for (const auto& x : v) out.append(pyint(x));
    return out;
}

IntMatrix mat(const py::iterable& rows, std::size_t cols = 0) {
    std::vector<Vec> r;
    for (auto row : rows) r.push_back(vec(py::reinterpret_borrow<py::iterable>(row)));
    return IntMatrix::from_rows(r, cols);
}

py::list pymat(const IntMatrix& m) {
    py::list out;
    for (std::size_t i = 0; i < m.rows; ++i) out.append(pylist(m.row(i)));
    return out;
}

py::dict outcome(const IlpOutcome& r) {
    py::dict d;
    d["status"] = r.status == IlpOutcome::Status::optimum      ? "optimum"
                  : r.status == IlpOutcome::Status::infeasible ? "infeasible"
                                                               : "aborted";
    d["x"] = pylist(r.x);
    d["value"] = pyint(r.value);
    d["pivots"] = r.pivots;
    return d;
}

IlpProblem problem(const py::iterable& a, const py::iterable& b, const py::iterable& c) {
    IlpProblem p;
    p.c = vec(c);
    p.b = vec(b);
    p.a = mat(a, p.c.size());
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact modular character computations.";

    static py::exception<Error> error(m, "MocError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    m.def("legacy_encode", [](const py::int_& n) {
        std::vector<long> w;
        for (auto x : legacy_encode(big(n)).words) w.push_back(x);
        return w;
    });
    m.def("legacy_decode", [](const std::vector<std::int32_t>& w) { return pyint(legacy_decode(LegacyRecord{w})); });

    m.def("hnf", [](const py::iterable& a) { return pymat(hnf(mat(a))); });
    m.def("det", [](const py::iterable& a) { return pyint(det(mat(a))); });

    m.def(
        "dec_solve",
        [](const py::iterable& w, const py::iterable& basis, long q, int maxj) -> py::object {
            DecOptions opt;
            opt.q = q;
            opt.maxj = maxj;
            Vec wv = vec(w);
            DecOutcome r = dec_solve(wv, mat(basis, wv.size()), opt);
            if (auto* c = std::get_if<DecCoefficients>(&r)) return pylist(c->z);
            if (std::holds_alternative<DecNotInSpan>(r)) return py::none();
            auto& u = std::get<DecUndecided>(r);
            throw Inconclusive(u.reason == DecUndecided::Reason::rational_not_integral
                                   ? "w is a non-integral rational combination of the basis"
                                   : "the q-adic expansion did not terminate within maxj digits");
        },
        py::arg("w"), py::arg("basis"), py::arg("q") = 101, py::arg("maxj") = 20,
        "Integral coefficients of w over the rows of basis, or None when w is not in their span.");

    m.def(
        "gomory_solve",
        [](const py::iterable& a, const py::iterable& b, const py::iterable& c) { return outcome(gomory_solve(problem(a, b, c))); },
        "minimize c.x subject to A x <= b over nonnegative integers (dual feasible tableau)");
    m.def("solve_bounded", [](const py::iterable& a, const py::iterable& b, const py::iterable& c, const py::iterable& upper) {
        return outcome(solve_bounded(problem(a, b, c), vec(upper)));
    });
    m.def("brute_force_ilp", [](const py::iterable& a, const py::iterable& b, const py::iterable& c, const py::iterable& upper) {
        return outcome(brute_force_ilp(problem(a, b, c), vec(upper)));
    });

    m.def("certify_pair", [](const py::iterable& u) {
        PairCheck c = certify_pair(mat(u));
        return py::make_tuple(c.basic_pair, pyint(c.det));
    });
    m.def("detect_atom_pims", [](const py::iterable& u) { return detect_atom_pims(mat(u)); });

    m.def(
        "part_test",
        [](const py::iterable& n, const py::iterable& relations) {
            Vec nv = vec(n);
            PartTest t = part_test(nv, mat(relations, nv.size()));
            return py::make_tuple(t.verdict == Verdict::proved, t.part ? py::object(pylist(*t.part)) : py::none());
        },
        "True when no proper part of n is compatible with the relation rows.");

    m.def("fong_parity", [](const py::iterable& projectives, const py::iterable& degrees, const std::vector<bool>& real,
                            std::size_t trivial) {
        std::vector<BigInt> deg;
        for (auto d : degrees) deg.push_back(big(d));
        Parity p = fong_parity(mat(projectives), deg, real, trivial, 2);
        py::dict d;
        d["carrier"] = p.carrier ? py::object(py::int_(*p.carrier)) : py::none();
        d["trivial_pim"] = p.trivial_pim ? py::object(pylist(*p.trivial_pim)) : py::none();
        d["contained"] = p.contained;
        return d;
    });

    m.def(
        "enumerate_fp1",
        [](const py::iterable& u, const py::iterable& v, const py::iterable& w, std::uint64_t budget) {
            Fp1Instance inst{mat(u), mat(v), mat(w)};
            if (inst.v.rows == 0) inst.v = IntMatrix(0, inst.u.rows);
            if (inst.w.rows == 0) inst.w = IntMatrix(0, inst.u.rows);
            Fp1Options opt;
            opt.node_budget = budget;
            Fp1Result r = enumerate_fp1(inst, opt);
            py::list sols;
            for (const auto& s : r.solutions) sols.append(py::make_tuple(pymat(s.u1), pymat(s.u2)));
            return py::make_tuple(sols, r.complete);
        },
        py::arg("u"), py::arg("v"), py::arg("w"), py::arg("node_budget") = 100'000'000);

    py::class_<MocTable, std::shared_ptr<MocTable>>(m, "Table")
        .def_readonly("name", &MocTable::name)
        .def_readonly("labels", &MocTable::labels)
        .def_property_readonly("order", [](const MocTable& t) { return pyint(t.group_order); })
        .def_property_readonly("rows", [](const MocTable& t) {
            py::list out;
            for (const auto& r : t.rows) out.append(pylist(r));
            return out;
        })
        .def("usual", [](const MocTable& t) {
            py::list out;
            for (const auto& row : to_usual(t)) {
                py::list r;
                for (const auto& c : row) r.append(c.str());
                out.append(r);
            }
            return out;
        })
        .def("blocks", [](const MocTable& t, long p) { return block_distribution(t, p); });
    m.def("load_table", [](const std::string& path) { return std::make_shared<MocTable>(load_table(path)); });

    m.def(
        "run",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int rc = run_command(args, out, err);
            return py::make_tuple(rc, out.str(), err.str());
        },
        "Runs one moc command line; returns (exit status, stdout, stderr).");
}
