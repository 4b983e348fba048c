#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "zgunits/abgroup.hpp"
#include "zgunits/cycunits.hpp"
#include "zgunits/error.hpp"
#include "zgunits/groupring.hpp"
#include "zgunits/hoechsmann.hpp"
#include "zgunits/merge.hpp"

namespace py = pybind11;
using namespace zgunits;

namespace {

py::int_ to_py(const Int& x) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(x.get_str().c_str(), nullptr, 10));
}

Int from_py(const py::int_& x) {
  return Int(py::reinterpret_steal<py::str>(PyObject_Str(x.ptr())).cast<std::string>());
}

py::list to_py(const std::vector<Int>& v) {
  py::list out;
  for (const auto& x : v) out.append(to_py(x));
  return out;
}

GroupRingElement element_from_py(const AbelianGroup& g, const std::vector<py::int_>& coeffs) {
  if (coeffs.size() != static_cast<std::size_t>(g.order()))
    fail(ErrorKind::ParseError, "expected " + std::to_string(g.order()) + " coefficients");
  std::vector<Int> c;
  c.reserve(coeffs.size());
  for (const auto& x : coeffs) c.push_back(from_py(x));
  return GroupRingElement::from_int_coeffs(g, c);
}

MergeOptions merge_options(std::uint64_t max_enum, unsigned precision, std::uint64_t seed) {
  MergeOptions o;
  o.ring_units.enumeration_bound = max_enum;
  o.ring_units.seed = seed;
  o.component_units.saturation.precision = precision;
  o.component_units.saturation.seed = seed;
  return o;
}

py::list element_list(const AbelianGroup& g) {
  py::list out;
  for (long i = 0; i < g.order(); ++i) out.append(py::cast(g.element(static_cast<std::size_t>(i)).exponents));
  return out;
}

py::dict units(const std::string& spec, std::uint64_t max_enum, unsigned precision, std::uint64_t seed) {
  const AbelianGroup g = AbelianGroup::parse(spec);
  ZGUnitGroup z;
  {
    py::gil_scoped_release release;
    z = unit_group_zg(g, merge_options(max_enum, precision, seed));
  }
  py::list torsion, free;
  for (std::size_t i = 0; i < z.generators.size(); ++i) {
    if (z.orders[i] == 0)
      free.append(to_py(z.generators[i].int_coeffs()));
    else
      torsion.append(py::make_tuple(to_py(z.orders[i]), to_py(z.generators[i].int_coeffs())));
  }
  py::dict out;
  out["group"] = g.name();
  out["order"] = g.order();
  out["elements"] = element_list(g);
  out["rank"] = z.rank();
  out["torsion_order"] = to_py(z.presentation.torsion_order());
  out["torsion"] = torsion;
  out["free"] = free;
  out["seconds"] = z.report.total_seconds;
  return out;
}

py::object hind(const std::string& spec, std::uint64_t max_enum, unsigned precision, std::uint64_t seed) {
  const AbelianGroup g = AbelianGroup::parse(spec);
  HoechsmannResult r;
  {
    py::gil_scoped_release release;
    HoechsmannOptions o;
    o.merge = merge_options(max_enum, precision, seed);
    r = hoechsmann_index(g, o);
  }
  if (!r.index) return py::none();
  return to_py(*r.index);
}

py::list constructable_units(const std::string& spec) {
  const AbelianGroup g = AbelianGroup::parse(spec);
  py::list out;
  for (const auto& u : constructable_group(g)) out.append(to_py(u.int_coeffs()));
  return out;
}

py::dict cyclotomic_units(long n, unsigned precision) {
  UnitGroupDesc d;
  {
    py::gil_scoped_release release;
    FullUnitOptions o;
    o.saturation.precision = precision;
    d = full_unit_group(n, o);
  }
  py::list gens;
  for (const auto& u : d.free_gens) gens.append(u.to_string());
  py::dict out;
  out["conductor"] = d.conductor;
  out["torsion_order"] = d.torsion_order;
  out["torsion_generator"] = d.torsion_gen.to_string();
  out["free"] = gens;
  return out;
}

py::list multiply(const std::string& spec, const std::vector<py::int_>& a, const std::vector<py::int_>& b) {
  const AbelianGroup g = AbelianGroup::parse(spec);
  return to_py((element_from_py(g, a) * element_from_py(g, b)).int_coeffs());
}

py::list inverse(const std::string& spec, const std::vector<py::int_>& a) {
  const AbelianGroup g = AbelianGroup::parse(spec);
  return to_py(inverse_in_zg(element_from_py(g, a)).int_coeffs());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Unit groups of integral group rings of finite abelian groups";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::tuple args = py::make_tuple(std::string(error_kind_name(e.kind())), std::string(e.what()));
      PyErr_SetObject(error.ptr(), args.ptr());
    }
  });

  m.def("ayoub_rank", [](const std::string& spec) { return ayoub_rank(AbelianGroup::parse(spec)); },
        py::arg("group"), "Rank of (ZG)^* predicted by the rank formula.");
  m.def(
      "decompose", [](const std::string& spec) { return decomposition(AbelianGroup::parse(spec)); },
      py::arg("group"), "Wedderburn components of QG as (conductor, multiplicity) pairs.");
  m.def("units", &units, py::arg("group"), py::arg("max_enum") = 1'000'000,
        py::arg("precision") = kDefaultPrecision, py::arg("seed") = 0,
        "Torsion and free generators of (ZG)^* as coefficient lists in the group element order.");
  m.def("hind", &hind, py::arg("group"), py::arg("max_enum") = 1'000'000,
        py::arg("precision") = kDefaultPrecision, py::arg("seed") = 0,
        "Index of the constructable units in (ZG)^*, or None when it is infinite.");
  m.def("constructable_units", &constructable_units, py::arg("group"),
        "Generators of the constructable unit group as coefficient lists.");
  m.def("cyclotomic_units", &cyclotomic_units, py::arg("n"), py::arg("precision") = kDefaultPrecision,
        "Generators of Z[zeta_n]^* in the power basis.");
  m.def("multiply", &multiply, py::arg("group"), py::arg("a"), py::arg("b"));
  m.def("inverse", &inverse, py::arg("group"), py::arg("a"), "Inverse in ZG; raises Error if a is not a unit.");
}
