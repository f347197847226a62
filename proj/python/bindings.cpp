#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tkdx/snapshot.hpp"

namespace py = pybind11;
using namespace tkdx;

namespace {

std::vector<std::pair<std::uint32_t, std::uint64_t>> rows(const TopkResult& r) {
  std::vector<std::pair<std::uint32_t, std::uint64_t>> out;
  out.reserve(r.size());
  for (const auto& row : r) out.emplace_back(row.doc, row.tf);
  return out;
}

py::dict counters_dict(const QueryCounters& c) {
  py::dict d;
  d["boundary_searches"] = c.boundary_searches;
  d["rmq_calls"] = c.rmq_calls;
  d["heap_nodes"] = c.heap_nodes;
  d["decode_calls"] = c.decode_calls;
  d["wavelet_nodes"] = c.wavelet_nodes;
  d["fringe_leaves"] = c.fringe_leaves;
  d["listing_reports"] = c.listing_reports;
  return d;
}

Snapshot build(std::vector<std::string> docs, const std::string& index, std::uint32_t pi, const std::string& mode,
               std::size_t rho, std::size_t sample_rate, const std::string& backend, const std::string& separator) {
  if (separator.size() != 1) throw InputError("separator must be a single character");
  BuildOptions o;
  o.kind = parse_kind(index);
  o.pi = pi;
  o.mode = parse_mode(mode);
  o.rho = rho;
  o.sample_rate = sample_rate;
  o.backend = parse_backend(backend);
  py::gil_scoped_release nogil;
  return Snapshot::build(Corpus{std::move(docs), separator[0]}, o);
}

}  // namespace

PYBIND11_MODULE(_tkdx, m) {
  m.doc() = "Top-k most frequent document retrieval";

  auto input_error = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  (void)input_error;

  py::class_<Snapshot>(m, "Index")
      .def_static("build", &build, py::arg("docs"), py::arg("index") = "linear", py::arg("pi") = 4,
                  py::arg("mode") = "t1", py::arg("rho") = 4, py::arg("sample_rate") = 64,
                  py::arg("backend") = "plain", py::arg("separator") = "#",
                  "Build an index over a list of documents (document ids start at 1).")
      .def(
          "query",
          [](const Snapshot& s, const std::string& pattern, std::size_t k) {
            py::gil_scoped_release nogil;
            return rows(s.query(pattern, k));
          },
          py::arg("pattern"), py::arg("k"), "Top-k (doc, tf) pairs, tf descending then doc ascending.")
      .def(
          "query_with_counters",
          [](const Snapshot& s, const std::string& pattern, std::size_t k) {
            QueryCounters c;
            auto r = s.query(pattern, k, &c);
            return py::make_tuple(rows(r), counters_dict(c));
          },
          py::arg("pattern"), py::arg("k"))
      .def(
          "brute_force",
          [](const Snapshot& s, const std::string& pattern, std::size_t k) {
            return rows(brute_force_topk(s.text(), pattern, k));
          },
          py::arg("pattern"), py::arg("k"), "Reference answer from a linear scan of the document array.")
      .def_property_readonly("kind", [](const Snapshot& s) { return std::string(kind_name(s.kind())); })
      .def_property_readonly("doc_count", [](const Snapshot& s) { return s.header().docs; })
      .def_property_readonly("length", [](const Snapshot& s) { return s.header().length; })
      .def_property_readonly("entry_count", &Snapshot::entry_count)
      .def("space_report",
           [](const Snapshot& s) {
             std::vector<std::pair<std::string, std::uint64_t>> out;
             for (const auto& item : s.space_report()) out.emplace_back(item.component, item.bits);
             return out;
           })
      .def("serialize", [](const Snapshot& s) { return py::bytes(s.serialize()); })
      .def_static("deserialize",
                  [](const py::bytes& b) {
                    std::string bytes = b;
                    return Snapshot::deserialize(bytes);
                  })
      .def("save", [](const Snapshot& s, const std::string& path) { s.save_file(path); })
      .def_static("load", [](const std::string& path) { return Snapshot::load_file(path); });
}
