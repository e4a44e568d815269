#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lasat/errors.hpp"
#include "lasat/json_out.hpp"
#include "lasat/verify.hpp"

namespace py = pybind11;
using namespace lasat;

namespace {

py::object json_to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null: return py::none();
    case json::value_t::boolean: return py::bool_(j.get<bool>());
    case json::value_t::number_integer: return py::int_(j.get<long long>());
    case json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
    case json::value_t::number_float: return py::float_(j.get<double>());
    case json::value_t::string: return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const auto& item : j) out.append(json_to_py(item));
      return out;
    }
    case json::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it)
        out[py::str(it.key())] = json_to_py(it.value());
      return out;
    }
    default: return py::none();
  }
}

seed seed_from(const py::object& value) {
  if (py::isinstance<py::int_>(value)) return seed::from_u64(value.cast<std::uint64_t>());
  return seed::from_hex(value.cast<std::string>());
}

sampler_config config_from(double alpha, double beta1, double beta2, py::object theta,
                           long long horizon, long long r_cap) {
  sampler_config cfg;
  cfg.marking.alpha = alpha;
  cfg.marking.beta1 = beta1;
  cfg.marking.beta2 = beta2;
  if (!theta.is_none()) cfg.theta_override = theta.cast<double>();
  cfg.horizon = horizon;
  cfg.r_cap = r_cap;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_lasat, m) {
  m.doc() = "random local access to uniform satisfying assignments of k-CNF formulas";

  py::register_exception<error>(m, "LasatError");

  py::class_<formula>(m, "Formula")
      .def_static("parse_dimacs", &formula::parse_dimacs, py::arg("text"))
      .def_property_readonly("n", &formula::var_count)
      .def_property_readonly("k", &formula::k_max)
      .def_property_readonly("d", &formula::max_degree)
      .def_property_readonly("delta", &formula::max_overlap)
      .def("to_dimacs", &formula::to_dimacs)
      .def("clauses",
           [](const formula& f) {
             std::vector<std::vector<int>> out;
             for (const auto& c : f.clauses()) {
               std::vector<int> lits;
               for (const auto& l : c.lits) lits.push_back(l.encode());
               out.push_back(std::move(lits));
             }
             return out;
           })
      .def("__repr__", [](const formula& f) {
        return "<Formula n=" + std::to_string(f.var_count()) +
               " clauses=" + std::to_string(f.clauses().size()) + ">";
      });

  m.def("generate", &gen_formula, py::arg("n"), py::arg("clauses"), py::arg("k"),
        py::arg("d_max"), py::arg("gen_seed"), "deterministic random (k,d)-instance");
  m.def("example", &example_formula, "the five-variable walkthrough instance");

  py::class_<sampler_context>(m, "Sampler")
      .def(py::init([](const formula& f, const py::object& sd, double alpha, double beta1,
                       double beta2, py::object theta, long long horizon, long long r_cap) {
             return sampler_context(f, seed_from(sd),
                                    config_from(alpha, beta1, beta2, theta, horizon, r_cap));
           }),
           py::arg("formula"), py::arg("seed"), py::arg("alpha") = 1.0 / 75,
           py::arg("beta1") = 0.778, py::arg("beta2") = 0.96, py::arg("theta") = py::none(),
           py::arg("horizon") = 0, py::arg("r_cap") = 0)
      .def_property_readonly("marking_failed", &sampler_context::marking_failed)
      .def_property_readonly("marked",
                             [](const sampler_context& c) { return c.schedule().order; })
      .def_property_readonly("theta", &sampler_context::theta)
      .def("sample",
           [](const sampler_context& c, var_id v) { return json_to_py(to_json(c.sample(v), true)); },
           py::arg("var"))
      .def("sample_many", [](const sampler_context& c, std::vector<var_id> vars) {
        batch_result br = c.sample_many(std::move(vars));
        if (br.failed) fail(errc::sampler_failure, br.error);
        py::dict out;
        for (const auto& r : br.values) out[py::int_(r.var)] = r.value;
        return out;
      });

  m.def(
      "marking",
      [](const formula& f, const py::object& sd, double alpha, double beta1, double beta2) {
        sampler_config cfg = config_from(alpha, beta1, beta2, py::none(), 0, 0);
        marking_result mr = compute_marking(f, seed_from(sd), cfg.marking);
        auto val = validate_marking(f, mr.marked_vars(), alpha);
        return json_to_py(to_json(mr, val));
      },
      py::arg("formula"), py::arg("seed"), py::arg("alpha") = 1.0 / 75,
      py::arg("beta1") = 0.778, py::arg("beta2") = 0.96,
      "full marking with its per-clause validation");

  m.def(
      "component",
      [](const formula& f, const py::object& sd, var_id v) {
        sampler_context ctx(f, seed_from(sd));
        if (ctx.marking_failed()) fail(errc::sampler_failure, "marking failed for this seed");
        return json_to_py(to_json(conn(f, ctx.session_seed(), ctx.schedule(), ctx.margin(), v)));
      },
      py::arg("formula"), py::arg("seed"), py::arg("var"),
      "explore the reduced-formula component of an unmarked variable");

  m.def(
      "count_sat",
      [](const formula& f) { return enumerate_sat(f).size(); }, py::arg("formula"),
      "number of satisfying assignments (enumeration oracle)");

  m.def(
      "exact_marginal",
      [](const formula& f, std::vector<var_id> s, const std::map<var_id, int>& cond) {
        partial_assignment sigma(f.var_count());
        for (auto [v, b] : cond) sigma.set_bit(v, b);
        auto d = exact_marginal(f, std::move(s), sigma);
        py::list support, probs;
        for (const auto& key : d.support) support.append(py::cast(key));
        for (double p : d.probs) probs.append(p);
        return py::make_tuple(support, probs);
      },
      py::arg("formula"), py::arg("vars"), py::arg("cond") = std::map<var_id, int>{},
      "conditioned marginal distribution over a variable set");

  m.def(
      "min_conditional_lb",
      [](const formula& f, std::vector<var_id> marking) {
        auto r = min_conditional_lb(f, marking);
        py::dict out;
        out["b"] = r.b;
        out["argmin_var"] = r.argmin_var;
        out["zero_marginal"] = r.zero_marginal;
        out["all_full_conditionings_feasible"] = r.all_full_conditionings_feasible;
        return out;
      },
      py::arg("formula"), py::arg("marking"));

  m.def(
      "padding_prob",
      [](const formula& f, const std::map<var_id, int>& cond, var_id u, double theta) {
        partial_assignment sigma(f.var_count());
        for (auto [v, b] : cond) sigma.set_bit(v, b);
        auto pr = padding_prob(component_of(f, sigma, u), u, sigma, theta);
        return py::make_tuple(pr.q1, pr.p1);
      },
      py::arg("formula"), py::arg("cond"), py::arg("var"), py::arg("theta"),
      "(q1, p1) for the component of var under the conditioning");

  m.def(
      "conditions",
      [](double k, double log2_d, double alpha, double beta1, double beta2) {
        marking_params mp;
        mp.alpha = alpha;
        mp.beta1 = beta1;
        mp.beta2 = beta2;
        json out;
        out["marking_conditions"] = to_json(check_conditions_marking(k, log2_d, mp));
        out["margin_conditions"] = to_json(check_conditions_margin(k, log2_d, alpha));
        return json_to_py(out);
      },
      py::arg("k"), py::arg("log2_d"), py::arg("alpha") = 1.0 / 75, py::arg("beta1") = 0.778,
      py::arg("beta2") = 0.96, "numeric report for both parameter condition sets");

  m.def(
      "forward_scan",
      [](const formula& f, const py::object& sd, std::vector<var_id> marked, double theta,
         long long horizon) {
        scan_schedule sched = scan_schedule::from_marked(std::move(marked));
        margin_params par;
        par.theta = theta;
        par.horizon = horizon;
        par.r_cap = 1LL << 40;
        auto x = forward_scan(f, sched, seed_from(sd), par);
        py::dict out;
        for (int j = 1; j <= sched.m(); ++j)
          out[py::int_(sched.at(j))] = x[static_cast<std::size_t>(j - 1)];
        return out;
      },
      py::arg("formula"), py::arg("seed"), py::arg("marked"), py::arg("theta"),
      py::arg("horizon"), "systematic-scan chain run forward from the tape initialization");

  m.def(
      "margin_sample",
      [](const formula& f, const py::object& sd, std::vector<var_id> marked, double theta,
         long long horizon, var_id u) {
        scan_schedule sched = scan_schedule::from_marked(std::move(marked));
        margin_params par;
        par.theta = theta;
        par.horizon = horizon;
        par.r_cap = 1LL << 40;
        return margin_sample(f, seed_from(sd), sched, par, u);
      },
      py::arg("formula"), py::arg("seed"), py::arg("marked"), py::arg("theta"),
      py::arg("horizon"), py::arg("var"), "backward-simulated scan update for one marked variable");
}
