#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kzp/suite.hpp"

namespace py = pybind11;
using namespace kzp;

namespace {

KZContext context(int n, uint64_t p, const py::object& h, int ext_degree) {
  FieldRef K = ext_degree == 1 ? Field::prime(p) : Field::extension(p, ext_degree);
  if (py::isinstance<py::int_>(h)) return KZContext::make(n, K, K->from_int(h.cast<int64_t>()));
  return KZContext::make(n, K, K->from_digits(h.cast<std::vector<uint64_t>>()));
}

SuiteOptions options(uint64_t seed, std::optional<int> trials, bool katz, bool mutate) {
  SuiteOptions o;
  o.seed = seed;
  o.trials = trials;
  o.katz = katz;
  o.mutate = mutate;
  return o;
}

std::vector<std::string> dump(const std::vector<Certificate>& cs) {
  std::vector<std::string> out;
  for (auto& c : cs) out.push_back(c.to_json().dump());
  return out;
}

EvalPoint prime_point(uint64_t p, const std::vector<int64_t>& coords) {
  auto F = Field::prime(p);
  EvalPoint a{F, {}};
  for (auto x : coords) a.coords.push_back(F->from_int(x));
  return a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite-field verifier for KZ connections in characteristic p";

  py::register_exception<Error>(m, "KzpError", PyExc_ValueError);

  m.def("check_names", &check_names);

  m.def(
      "families",
      [](int n, uint64_t p, int64_t h) {
        auto ctx = KZContext::make(n, p, h);
        nlohmann::json doc = context_params(ctx);
        for (auto sign : {Sign::Plus, Sign::Minus}) {
          nlohmann::json arr = nlohmann::json::array();
          if (ctx.h != 0)
            for (auto& v : p_solutions(ctx, sign).vectors) arr.push_back(poly_vector_json(v));
          doc[sign == Sign::Plus ? "plus" : "minus"] = arr;
        }
        return doc.dump();
      },
      py::arg("n"), py::arg("p"), py::arg("h"));

  m.def(
      "run_suite",
      [](int n, uint64_t p, const py::object& h, int ext_degree, uint64_t seed, std::optional<int> trials, bool katz,
         bool mutate) { return dump(run_suite(context(n, p, h, ext_degree), options(seed, trials, katz, mutate))); },
      py::arg("n"), py::arg("p"), py::arg("h"), py::arg("ext_degree") = 1, py::arg("seed") = 1,
      py::arg("trials") = py::none(), py::arg("katz") = false, py::arg("mutate") = false);

  m.def(
      "run_check",
      [](const std::string& name, int n, uint64_t p, const py::object& h, int ext_degree, uint64_t seed,
         std::optional<int> trials, bool mutate) {
        return dump(run_check(context(n, p, h, ext_degree), name, options(seed, trials, false, mutate)));
      },
      py::arg("name"), py::arg("n"), py::arg("p"), py::arg("h"), py::arg("ext_degree") = 1, py::arg("seed") = 1,
      py::arg("trials") = py::none(), py::arg("mutate") = false);

  m.def(
      "psi",
      [](int n, uint64_t p, int64_t h, int k, const std::vector<int64_t>& point) {
        auto M = psi_at_point(KZContext::make(n, p, h), k, prime_point(p, point)).on_V();
        std::vector<std::vector<uint64_t>> rows(M.rows(), std::vector<uint64_t>(M.cols()));
        for (size_t i = 0; i < M.rows(); ++i)
          for (size_t j = 0; j < M.cols(); ++j) rows[i][j] = M(i, j);
        return rows;
      },
      py::arg("n"), py::arg("p"), py::arg("h"), py::arg("k"), py::arg("point"),
      "p-curvature Psi_k on V in the basis e_s - e_n at an F_p-point");

  m.def(
      "formal_dimension",
      [](int n, uint64_t p, int64_t h, const std::vector<int64_t>& point, int D) {
        return formal_dimension(KZContext::make(n, p, h), prime_point(p, point), D);
      },
      py::arg("n"), py::arg("p"), py::arg("h"), py::arg("point"), py::arg("D"));

  m.def("genus", [](int n, int q) { return genus_by_hodge_ranks(n, q); }, py::arg("n"), py::arg("q"));
}
