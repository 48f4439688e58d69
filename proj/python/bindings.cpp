#include "sudler/growth.hpp"
#include "sudler/kernel.hpp"
#include "sudler/limitfn.hpp"
#include "sudler/qcf.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace sudler;

namespace {

std::string big_str(const BigInt& v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

BigInt big_from(const py::int_& v) { return BigInt(py::str(py::handle(v)).cast<std::string>()); }

py::int_ big_to(const BigInt& v) {
    return py::reinterpret_steal<py::int_>(PyLong_FromString(big_str(v).c_str(), nullptr, 10));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Sudler products of quadratic irrationals";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);

    py::class_<EvalWithBound>(m, "EvalWithBound")
        .def_readonly("value", &EvalWithBound::value)
        .def_readonly("abs_err", &EvalWithBound::abs_err)
        .def_readonly("zero", &EvalWithBound::zero)
        .def("__float__", [](const EvalWithBound& e) { return e.value; })
        .def("__repr__", [](const EvalWithBound& e) {
            std::ostringstream os;
            os.precision(15);
            os << "EvalWithBound(" << e.value << " +- " << e.abs_err << ")";
            return os.str();
        });

    m.def("beta", [](long b) { return make_surd(b).value_d(); }, py::arg("b"));
    m.def("convergents", [](long b, int n_max) {
        std::vector<py::int_> out;
        for (const auto& q : convergents(b, n_max).q) out.push_back(big_to(q));
        return out;
    }, py::arg("b"), py::arg("n_max"));
    m.def("ostrowski", [](const py::int_& N, long b) { return ostrowski_expand(big_from(N), b).digits; },
          py::arg("N"), py::arg("b"));
    m.def("zeckendorff", [](const py::int_& N) { return zeckendorff_expand(big_from(N)).indices; }, py::arg("N"));

    m.def("product", py::overload_cast<long, std::uint64_t>(&sudler_product), py::arg("b"), py::arg("N"),
          py::call_guard<py::gil_scoped_release>());
    m.def("product_rational", &sudler_product_rational, py::arg("m"), py::arg("n"), py::arg("N"));
    m.def("perturbed_product", &perturbed_product, py::arg("b"), py::arg("n"), py::arg("eps"),
          py::call_guard<py::gil_scoped_release>());
    m.def("decompose", [](const py::int_& N, long b, bool reflected) {
        auto d = decompose(big_from(N), b, reflected);
        py::list blocks;
        for (const auto& blk : d.blocks)
            blocks.append(py::dict(py::arg("level") = blk.level, py::arg("offset") = big_to(blk.offset),
                                   py::arg("eps") = blk.eps, py::arg("inverse") = blk.inverse,
                                   py::arg("value") = blk.value.value));
        return py::make_tuple(d.product(), blocks);
    }, py::arg("N"), py::arg("b"), py::arg("reflected") = false);

    m.def("G", [](long b, double eps, double tol) { return G_eval(b, eps, tol); }, py::arg("b"), py::arg("eps"),
          py::arg("tol") = kDefaultTol);
    m.def("C", &C_const, py::arg("b"), py::arg("tol") = kDefaultTol);
    m.def("roots_near_zero", &roots_near_zero, py::arg("b"));
    m.def("certify_above", [](long b, double lo, double hi, double threshold) {
        auto c = certify_above(b, lo, hi, threshold);
        return py::make_tuple(c.ok(), c.bound);
    }, py::arg("b"), py::arg("lo"), py::arg("hi"), py::arg("threshold"));
    m.def("growth_verdict", [](long b) {
        auto v = growth_verdict(b);
        return py::dict(py::arg("conclusive") = v.conclusive, py::arg("liminf_positive") = v.liminf_positive,
                        py::arg("limsup_over_N_finite") = v.limsup_over_N_finite, py::arg("route") = v.route);
    }, py::arg("b"));
}
