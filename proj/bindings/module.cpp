#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "stabsec/analysis.hpp"
#include "stabsec/arrival.hpp"
#include "stabsec/checks.hpp"
#include "stabsec/core.hpp"
#include "stabsec/engine.hpp"
#include "stabsec/experiment.hpp"
#include "stabsec/json_io.hpp"
#include "stabsec/policies.hpp"

namespace py = pybind11;
using namespace stabsec;

namespace {

py::dict report_to_dict(const SatisfactionReport& rep) {
  py::dict d;
  d["blocking_pairs"] = rep.blocking_pairs;
  d["satisfied_girls"] = rep.satisfied_girls;
  d["satisfied_boys"] = rep.satisfied_boys;
  d["satisfied_pairs"] = rep.satisfied_pairs;
  d["satisfied_girl_weight"] = rep.satisfied_girl_weight;
  d["satisfied_boy_weight"] = rep.satisfied_boy_weight;
  return d;
}

Matching matching_from_pairs(const std::vector<std::pair<int, int>>& pairs) {
  Matching m;
  for (auto [boy, girl] : pairs) m.add(boy, girl);
  return m;
}

py::dict run_once(const std::string& policy, const Instance& inst,
                  const std::vector<int>& permutation, double gamma, std::uint64_t seed) {
  PolicyOptions opt;
  opt.gamma = gamma;
  auto pol = make_policy(policy, inst, opt, seed);
  RunTrace trace = run_online(inst, permutation, *pol, seed);
  SatCounts c = satisfaction_counts(inst, trace.final_matching);
  py::dict d;
  d["matching"] = trace.final_matching.pairs();
  d["satisfied_girls"] = c.girls;
  d["satisfied_boys"] = c.boys;
  d["satisfied_pairs"] = c.pairs;
  d["satisfied_girl_weight"] = c.girl_weight;
  d["satisfied_boy_weight"] = c.boy_weight;
  d["catastrophe"] = std::string(catastrophe_name(trace.catastrophe));
  d["conservative"] = is_conservative(trace, inst);
  return d;
}

py::dict simulate(const std::string& policy, int n, int m, long long trials,
                  const std::string& criterion, double gamma, const std::string& weights,
                  std::uint64_t seed, const std::string& out, int threads) {
  ExperimentConfig cfg;
  cfg.policy_name = policy;
  cfg.criterion = criterion_from_name(criterion);
  cfg.num_girls = n;
  cfg.num_boys = m > 0 ? m : n;
  cfg.trials = trials;
  cfg.gamma = gamma;
  cfg.weights_spec = weights;
  cfg.master_seed = seed;
  cfg.output_path = out;
  cfg.threads = threads;
  ExperimentSummary s = run_experiment(cfg);
  py::dict d;
  d["mean_ratio"] = s.mean_ratio;
  d["std"] = s.std_dev;
  d["q5"] = s.q5;
  d["q50"] = s.q50;
  d["q95"] = s.q95;
  d["catastrophe_rate"] = s.catastrophe_rate;
  d["trials"] = s.trials;
  return d;
}

py::dict dp_value(int n, const std::string& dist, const std::string& criterion,
                  std::optional<int> cap) {
  ExactDist d;
  if (dist == "uniform")
    d = ExactDist::make_uniform();
  else if (dist == "half")
    d = ExactDist::adversarial_half(n);
  else if (dist == "recursion") {
    AdversarialRecursion rec = adversarial_recursion(n, cap);
    d = ExactDist::adversarial(rec.p);
  } else {
    throw std::invalid_argument("dist must be uniform, half or recursion");
  }
  DpResult res = optimal_online_value(n, d, criterion_from_name(criterion), cap);
  py::dict out;
  out["n"] = res.n;
  out["criterion"] = criterion;
  out["distribution"] = res.distribution;
  out["value_num"] = res.value.num().to_string();
  out["value_den"] = res.value.den().to_string();
  out["value"] = res.value.to_double();
  return out;
}

py::dict recursion_dict(int n, std::optional<int> cap) {
  AdversarialRecursion rec = adversarial_recursion(n, cap);
  py::list v, p;
  for (const Rational& x : rec.v) v.append(x.to_string());
  for (const Rational& x : rec.p) p.append(x.to_string());
  py::dict d;
  d["v"] = v;
  d["p"] = p;
  d["step_inequality"] = rec.step_inequality_ok;
  d["bound_chain"] = rec.bound_chain_ok;
  return d;
}

py::dict aux_bound_dict(int n) {
  AuxBound b = auxiliary_game_bound(n);
  py::dict d;
  d["n"] = b.n;
  d["value_num"] = b.bound.num().to_string();
  d["value_den"] = b.bound.den().to_string();
  d["bound"] = b.bound.to_double();
  d["ratio_to_sqrt_half_pi_n"] = b.ratio_to_sqrt_half_pi_n;
  return d;
}

py::dict aux_opt_dict(int n, std::optional<int> cap) {
  AuxOptimal r = auxiliary_game_optimal(n, cap);
  py::dict d;
  d["n"] = r.n;
  d["value_num"] = r.value.num().to_string();
  d["value_den"] = r.value.den().to_string();
  d["value"] = r.value.to_double();
  d["best_set"] = r.best_set;
  return d;
}

py::dict attack_dict(const std::string& policy, int n, double gamma, std::uint64_t seed) {
  BalancedPolicyFactory factory = [&](int nn, std::uint64_t s) {
    Instance inst(nn, nn, std::vector<double>(nn, 1.0), std::vector<double>(nn, 1.0));
    PolicyOptions opt;
    opt.gamma = gamma;
    return make_policy(policy, inst, opt, s);
  };
  AttackResult a = deterministic_adversary_attack(factory, n, seed);
  py::dict d;
  d["permutation"] = a.permutation;
  d["t_star"] = a.t_star;
  d["satisfied_girls"] = a.satisfied_girls;
  return d;
}

py::dict check_dict(int index) {
  CheckResult r = run_criterion(index);
  py::dict d;
  d["index"] = r.index;
  d["name"] = r.name;
  d["pass"] = r.pass;
  d["detail"] = r.detail;
  d["seconds"] = r.seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_stabsec, m) {
  m.doc() = "online stable-matching simulation lab";

  py::class_<Instance>(m, "Instance")
      .def(py::init<int, int, std::optional<std::vector<double>>,
                    std::optional<std::vector<double>>>(),
           py::arg("num_girls"), py::arg("num_boys"), py::arg("girl_weights") = std::nullopt,
           py::arg("boy_weights") = std::nullopt)
      .def_property_readonly("num_girls", &Instance::num_girls)
      .def_property_readonly("num_boys", &Instance::num_boys)
      .def_property_readonly("n", &Instance::n)
      .def("to_json", &instance_to_json)
      .def_static("from_json", &instance_from_json);

  m.def("matching_from_pairs", &matching_from_pairs, py::arg("pairs"),
        "build a matching from (boy, girl) pairs");
  py::class_<Matching>(m, "Matching")
      .def(py::init<>())
      .def("add", &Matching::add, py::arg("boy"), py::arg("girl"))
      .def("pairs", &Matching::pairs)
      .def("girl_of", &Matching::girl_of)
      .def("boy_of", &Matching::boy_of)
      .def("to_json", &matching_to_json)
      .def_static("from_json", &matching_from_json);

  m.def("blocking_pairs", &blocking_pairs, py::arg("instance"), py::arg("matching"));
  m.def("evaluate_satisfaction",
        [](const Instance& inst, const Matching& mm) {
          return report_to_dict(evaluate_satisfaction(inst, mm));
        },
        py::arg("instance"), py::arg("matching"));
  m.def("stable_matching", &stable_matching, py::arg("instance"));
  m.def("optimum_value",
        [](const Instance& inst, const std::string& crit) {
          return optimum_value(inst, criterion_from_name(crit));
        },
        py::arg("instance"), py::arg("criterion"));
  m.def("transpose_matching", &transpose_matching, py::arg("matching"), py::arg("instance"));

  m.def("sample_uniform_arrival",
        [](int n, std::uint64_t seed) {
          Rng rng(seed);
          return sample_arrival(ArrivalProcess::uniform(n), rng);
        },
        py::arg("n"), py::arg("seed"));
  m.def("sample_adversarial_arrival",
        [](int n, const std::vector<double>& probs, std::uint64_t seed) {
          Rng rng(seed);
          return sample_arrival(ArrivalProcess::adversarial(n, probs), rng);
        },
        py::arg("n"), py::arg("probs"), py::arg("seed"));

  m.def("run_once", &run_once, py::arg("policy"), py::arg("instance"), py::arg("permutation"),
        py::arg("gamma") = 0.15, py::arg("seed") = 1);
  m.def("simulate", &simulate, py::arg("policy"), py::arg("n"), py::arg("m") = 0,
        py::arg("trials") = 100, py::arg("criterion") = "boys", py::arg("gamma") = 0.15,
        py::arg("weights") = "", py::arg("seed") = 1, py::arg("out") = "",
        py::arg("threads") = 0);

  m.def("dp_value", &dp_value, py::arg("n"), py::arg("dist") = "uniform",
        py::arg("criterion") = "girls", py::arg("cap") = std::nullopt);
  m.def("adversarial_recursion", &recursion_dict, py::arg("n"), py::arg("cap") = std::nullopt);
  m.def("aux_bound", &aux_bound_dict, py::arg("n"));
  m.def("aux_optimal", &aux_opt_dict, py::arg("n"), py::arg("cap") = std::nullopt);
  m.def("good_event", &good_event_probability_exact, py::arg("k"), py::arg("l"));
  m.def("attack", &attack_dict, py::arg("policy"), py::arg("n"), py::arg("gamma") = 0.15,
        py::arg("seed") = 1);
  m.def("run_check", &check_dict, py::arg("index"));
}
