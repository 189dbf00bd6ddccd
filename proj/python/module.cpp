#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>

#include "coxkl/errors.hpp"
#include "coxkl/hat.hpp"
#include "coxkl/io.hpp"
#include "coxkl/springer.hpp"
#include "coxkl/verify.hpp"

namespace py = pybind11;
using namespace coxkl;

namespace {

py::object to_python(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json r_form(const LaurentPoly& p) {
  json j = poly_u_json(p);
  j["abar"] = poly_abar_json(p)["abar"];
  return j;
}

json p_form(const QPoly& p) {
  json j = poly_q_json(p);
  j["u"] = poly_u_json(p.in_u())["u"];
  return j;
}

// One base system with its hat and memo tables; everything is addressed by
// the text forms the command line uses.
class Session {
 public:
  Session(const std::string& system_json, const std::string& hat_json)
      : W_(system_from_json(json::parse(system_json))),
        config_(hat_config_from_json(json::parse(hat_json))),
        h_(*W_, config_),
        V_(*W_),
        T_(h_) {}

  std::vector<std::string> generators() const { return W_->generator_names(); }
  std::string reduce(const std::string& word) const { return W_->format(parse_element(*W_, word)); }
  int length(const std::string& word) const { return parse_element(*W_, word).length(); }
  bool bruhat_leq(const std::string& x, const std::string& y) const {
    return W_->bruhat_leq(parse_element(*W_, x), parse_element(*W_, y));
  }
  bool is_finite() const { return W_->is_finite(); }
  std::string hat_type() const { return h_.hat().finite_type(h_.hat().all()).value_or("infinite"); }

  py::object r_tilde(const std::string& x, const std::string& y) const {
    return to_python(r_form(V_.classical().r_tilde(parse_element(*W_, x), parse_element(*W_, y))));
  }
  py::object kl_p(const std::string& x, const std::string& y) const {
    return to_python(p_form(V_.classical().kl_p(parse_element(*W_, x), parse_element(*W_, y))));
  }
  py::object kl_q(const std::string& x, const std::string& y) const {
    return to_python(p_form(V_.classical().kl_q(parse_element(*W_, x), parse_element(*W_, y))));
  }

  std::vector<std::string> elements() const {
    std::vector<std::string> out;
    for (const auto& v : V_.elements()) out.push_back(velement_text(v));
    return out;
  }
  int dim(const std::string& v) const { return v_dim(parse_velement(*W_, v)); }
  py::object b(const std::string& w, const std::string& v) const {
    return to_python(r_form(V_.b_poly(parse_velement(*W_, w), parse_velement(*W_, v))));
  }
  bool leq(const std::string& w, const std::string& v) const {
    return V_.leq(parse_velement(*W_, w), parse_velement(*W_, v));
  }
  py::object c(const std::string& w, const std::string& v) const {
    return to_python(p_form(V_.c_poly(parse_velement(*W_, w), parse_velement(*W_, v))));
  }
  py::object c_inv(const std::string& w, const std::string& v) const {
    return to_python(p_form(V_.c_inv_poly(parse_velement(*W_, w), parse_velement(*W_, v))));
  }
  long mobius(const std::string& w, const std::string& v) const {
    return V_.mobius(parse_velement(*W_, w), parse_velement(*W_, v));
  }

  std::string phi(const std::string& v) const { return format(h_, coxkl::phi(h_, parse_velement(*W_, v))); }
  py::object r_a(const std::string& x, const std::string& y) const {
    return to_python(r_form(T_.r_a(parse_omega(h_, x), parse_omega(h_, y))));
  }
  py::object p_a(const std::string& x, const std::string& y) const {
    return to_python(p_form(T_.p_a(parse_omega(h_, x), parse_omega(h_, y))));
  }
  int twisted_length(const std::string& x) const { return h_.twisted_length(parse_element(h_.hat(), x)); }

  py::object verify(const std::string& suite, std::uint64_t seed, std::size_t samples, bool slow) const {
    VerifyOptions options;
    options.seed = seed;
    options.samples = samples;
    options.slow = slow;
    return to_python(run_suite(suite, *W_, config_, options).to_json());
  }

 private:
  std::unique_ptr<CoxeterSystem> W_;
  HatConfig config_;
  HatSystem h_;
  SpringerPoset V_;
  TwistedKL T_;
};

}  // namespace

PYBIND11_MODULE(_coxkl, m) {
  m.doc() = "Springer's poset V and twisted Kazhdan-Lusztig polynomials";
  m.attr("__version__") = COXKL_VERSION;
  m.def("suite_names", &suite_names);

  py::register_exception<InfiniteGroupError>(m, "InfiniteGroupError", PyExc_ValueError);
  py::register_exception<NotInOmegaError>(m, "NotInOmegaError", PyExc_ValueError);

  py::class_<Session>(m, "Session")
      .def(py::init<const std::string&, const std::string&>(), py::arg("system_json"), py::arg("hat_json") = "{}")
      .def_property_readonly("generators", &Session::generators)
      .def_property_readonly("is_finite", &Session::is_finite)
      .def_property_readonly("hat_type", &Session::hat_type)
      .def("reduce", &Session::reduce)
      .def("length", &Session::length)
      .def("bruhat_leq", &Session::bruhat_leq)
      .def("r_tilde", &Session::r_tilde)
      .def("kl_p", &Session::kl_p)
      .def("kl_q", &Session::kl_q)
      .def("elements", &Session::elements)
      .def("dim", &Session::dim)
      .def("b", &Session::b)
      .def("leq", &Session::leq)
      .def("c", &Session::c)
      .def("c_inv", &Session::c_inv)
      .def("mobius", &Session::mobius)
      .def("phi", &Session::phi)
      .def("r_a", &Session::r_a)
      .def("p_a", &Session::p_a)
      .def("twisted_length", &Session::twisted_length)
      .def("verify", &Session::verify, py::arg("suite"), py::arg("seed") = VerifyOptions{}.seed,
           py::arg("samples") = 0, py::arg("slow") = false);
}
