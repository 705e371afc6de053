#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eqmine/cli.hpp"
#include "eqmine/errors.hpp"
#include "eqmine/report.hpp"
#include "eqmine/search.hpp"
#include "eqmine/stats.hpp"
#include "eqmine/synth.hpp"
#include "eqmine/validate.hpp"

namespace py = pybind11;
using namespace eqmine;

namespace {

using PairList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

PairSet pairset_from(const PairList& pairs) {
    std::vector<ColumnPair> cp;
    cp.reserve(pairs.size());
    for (auto [l, r] : pairs) cp.push_back({l, r});
    return PairSet::canonical(std::move(cp));
}

PairList pairset_to(const PairSet& p) {
    PairList out;
    out.reserve(p.arity());
    for (const auto& pr : p.pairs()) out.emplace_back(pr.left, pr.right);
    return out;
}

Matrix matrix_from(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw DimensionMismatch("expected a 2-D array");
    Matrix m(static_cast<std::size_t>(arr.shape(0)), static_cast<std::size_t>(arr.shape(1)));
    std::copy(arr.data(), arr.data() + arr.size(), m.data.begin());
    return m;
}

py::object json_to_py(const json& j) {
    switch (j.type()) {
        case json::value_t::null: return py::none();
        case json::value_t::boolean: return py::bool_(j.get<bool>());
        case json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
        case json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
        case json::value_t::number_float: return py::float_(j.get<double>());
        case json::value_t::string: return py::str(j.get<std::string>());
        case json::value_t::array: {
            py::list out;
            for (const auto& e : j) out.append(json_to_py(e));
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

TestConfig make_test_config(double alpha, const std::string& test, int perms,
                            const std::string& pvalue_mode, std::uint64_t seed,
                            bool zscore = false) {
    TestConfig cfg;
    cfg.alpha = alpha;
    cfg.univariate_test = test == "wilcoxon" ? UnivariateTest::Wilcoxon : UnivariateTest::KS;
    cfg.permutations = perms;
    cfg.pvalue_mode_univariate =
        pvalue_mode == "permutation" ? PValueMode::Permutation : PValueMode::Asymptotic;
    cfg.master_seed = seed;
    cfg.pooled_zscore = zscore;
    cfg.validate();
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_eqmine, m) {
    m.doc() = "Discovery of equally distributed attribute sets between two relations";

    py::class_<Relation>(m, "Relation")
        .def_readonly("name", &Relation::name)
        .def_readonly("row_count", &Relation::row_count)
        .def("column_names", &Relation::column_names)
        .def("column",
             [](const Relation& r, std::size_t j) {
                 if (j >= r.column_count()) throw py::index_error();
                 return r.columns[j].values;
             })
        .def("__repr__", [](const Relation& r) {
            return "<Relation '" + r.name + "' " + std::to_string(r.row_count) + "x" +
                   std::to_string(r.column_count()) + ">";
        });

    m.def("canonicalize",
          [](const PairList& pairs) { return pairset_to(pairset_from(pairs)); },
          py::arg("pairs"));
    m.def("specializes",
          [](const PairList& a, const PairList& b) {
              return specializes(pairset_from(a), pairset_from(b));
          },
          py::arg("p1"), py::arg("p2"));
    m.def("subsets_of_arity",
          [](const PairList& p, std::size_t k) {
              std::vector<PairList> out;
              for (const auto& s : subsets_of_arity(pairset_from(p), k))
                  out.push_back(pairset_to(s));
              return out;
          },
          py::arg("pairs"), py::arg("k"));

    m.def("load_relation",
          [](const std::string& path, const std::string& delimiter, const std::string& header) {
              LoadOptions opt;
              opt.delimiter = delimiter.empty() ? ',' : delimiter[0];
              opt.header = header == "present"  ? HeaderMode::Present
                           : header == "absent" ? HeaderMode::Absent
                                                : HeaderMode::Auto;
              return load_relation(path, opt);
          },
          py::arg("path"), py::arg("delimiter") = ",", py::arg("header") = "auto");
    m.def("write_relation",
          [](const Relation& rel, const std::string& path, const std::string& delimiter) {
              write_relation(rel, path, delimiter.empty() ? ',' : delimiter[0]);
          },
          py::arg("relation"), py::arg("path"), py::arg("delimiter") = ",");

    m.def("ks_statistic",
          [](const std::vector<double>& x, const std::vector<double>& y) {
              return ks_statistic(x, y);
          },
          py::arg("x"), py::arg("y"));
    m.def("ks_pvalue", &ks_pvalue, py::arg("d"), py::arg("n"), py::arg("m"));
    m.def("wilcoxon_ranksum",
          [](const std::vector<double>& x, const std::vector<double>& y, double alpha) {
              return json_to_py(outcome_to_json(wilcoxon_ranksum(x, y, alpha)));
          },
          py::arg("x"), py::arg("y"), py::arg("alpha") = 0.05);
    m.def("energy_statistic",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& xs,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& ys) {
              return energy_statistic(matrix_from(xs), matrix_from(ys));
          },
          py::arg("xs"), py::arg("ys"));
    m.def("permutation_pvalue",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& pooled,
             std::size_t n, int b, std::uint64_t seed) {
              auto res = permutation_pvalue(matrix_from(pooled), n, b, seed);
              return py::make_tuple(res.statistic, res.p_value);
          },
          py::arg("pooled"), py::arg("n"), py::arg("b"), py::arg("seed"));
    m.def("binomial_tail", &binomial_tail, py::arg("n_trials"), py::arg("p0"),
          py::arg("observed"));

    m.def("test_pairs",
          [](const Relation& left, const Relation& right, const PairList& pairs, double alpha,
             const std::string& test, int perms, const std::string& pvalue_mode,
             std::uint64_t seed, std::size_t max_rows, bool zscore) {
              PairSet p = pairset_from(pairs);
              TestConfig cfg = make_test_config(alpha, test, perms, pvalue_mode, seed, zscore);
              auto view = candidate_view(left, right, p, max_rows,
                                         candidate_seed(cfg.master_seed, p, kSeedSaltView));
              return json_to_py(outcome_to_json(test_candidate(view, p, cfg)));
          },
          py::arg("left"), py::arg("right"), py::arg("pairs"), py::arg("alpha") = 0.05,
          py::arg("test") = "ks", py::arg("perms") = 199, py::arg("pvalue_mode") = "asymptotic",
          py::arg("seed") = 1, py::arg("max_rows") = 2000, py::arg("zscore") = false);

    m.def("discover",
          [](const Relation& left, const Relation& right, double alpha, const std::string& test,
             int perms, const std::string& pvalue_mode, std::uint64_t seed, std::size_t max_arity,
             std::size_t max_rows, double budget_beta, bool hard_apriori, bool include_identity) {
              TestConfig tcfg = make_test_config(alpha, test, perms, pvalue_mode, seed);
              SearchConfig scfg;
              scfg.max_arity = max_arity;
              scfg.budget_beta = budget_beta;
              scfg.hard_apriori = hard_apriori;
              scfg.alpha = alpha;
              scfg.include_identity_pairs = include_identity;
              scfg.max_rows = max_rows;
              scfg.validate();
              auto report = discover(left, right, tcfg, scfg);
              return json_to_py(report_to_json(report));
          },
          py::arg("left"), py::arg("right"), py::arg("alpha") = 0.05, py::arg("test") = "ks",
          py::arg("perms") = 199, py::arg("pvalue_mode") = "asymptotic", py::arg("seed") = 1,
          py::arg("max_arity") = 4, py::arg("max_rows") = 2000, py::arg("budget_beta") = 0.01,
          py::arg("hard_apriori") = false, py::arg("include_identity") = false);

    m.def("run_validation",
          [](std::size_t trials, std::size_t rows, std::size_t dims, int perms, double alpha,
             std::uint64_t seed) {
              ValidateConfig cfg;
              cfg.trials = trials;
              cfg.rows = rows;
              cfg.dims = dims;
              cfg.permutations = perms;
              cfg.alpha = alpha;
              cfg.seed = seed;
              return json_to_py(validation_to_json(run_validation(cfg)));
          },
          py::arg("trials") = 5, py::arg("rows") = 200, py::arg("dims") = 10,
          py::arg("perms") = 99, py::arg("alpha") = 0.1, py::arg("seed") = 1);

    m.def("gen_null_pair",
          [](std::size_t rows, std::uint64_t seed, const std::string& family, double rho,
             std::size_t dims) {
              ScenarioSpec spec;
              spec.rows = rows;
              spec.seed = seed;
              spec.rho = rho;
              spec.dims = dims;
              if (family == "gauss-corr") spec.family = Family::GaussCorr;
              else if (family == "mixture") spec.family = Family::Mixture;
              else if (family == "ring") spec.family = Family::Ring;
              else spec.family = Family::GaussIid;
              return gen_null_pair(spec);
          },
          py::arg("rows"), py::arg("seed"), py::arg("family") = "gauss-iid",
          py::arg("rho") = 0.0, py::arg("dims") = 1);
    m.def("gen_fig1_scenario", &gen_fig1_scenario, py::arg("rows"), py::arg("seed"));
    m.def("gen_shifted_pair", &gen_shifted_pair, py::arg("rows"), py::arg("dims"),
          py::arg("delta"), py::arg("seed"));

    m.def("run_cli", &run_cli, py::arg("args"),
          "Invoke the command-line interface; returns its exit code");

    py::register_exception<Error>(m, "EqmineError");
}
