#include "eqmine/report.hpp"

#include <fstream>

#include "eqmine/errors.hpp"

namespace eqmine {

namespace {

json pairs_to_json(const PairSet& p, const std::vector<std::string>& left_names,
                   const std::vector<std::string>& right_names) {
    json arr = json::array();
    for (const auto& pr : p.pairs()) {
        arr.push_back({{"left", left_names.at(pr.left)}, {"right", right_names.at(pr.right)}});
    }
    return arr;
}

PairSet pairs_from_json(const json& arr, const std::vector<std::string>& left_names,
                        const std::vector<std::string>& right_names) {
    auto index_of = [](const std::vector<std::string>& names, const std::string& n) {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == n) return static_cast<std::uint32_t>(i);
        throw Error("unknown column name in report: " + n);
    };
    std::vector<ColumnPair> pairs;
    for (const auto& e : arr)
        pairs.push_back({index_of(left_names, e.at("left").get<std::string>()),
                         index_of(right_names, e.at("right").get<std::string>())});
    return PairSet::canonical(std::move(pairs));
}

const char* univariate_name(UnivariateTest t) {
    return t == UnivariateTest::KS ? "ks" : "wilcoxon";
}

const char* pvalue_mode_name(PValueMode m) {
    return m == PValueMode::Asymptotic ? "asymptotic" : "permutation";
}

}  // namespace

json outcome_to_json(const TestOutcome& outcome) {
    return json{{"statistic", outcome.statistic},
                {"p_value", outcome.p_value},
                {"rejected", outcome.rejected},
                {"method", outcome.method},
                {"effective_rows", {{"left", outcome.left_rows}, {"right", outcome.right_rows}}}};
}

json report_to_json(const DiscoveryReport& r) {
    json doc;
    doc["config"] = {{"left", r.left_name},
                     {"right", r.right_name},
                     {"alpha", r.test_config.alpha},
                     {"test", univariate_name(r.test_config.univariate_test)},
                     {"perms", r.test_config.permutations},
                     {"pvalue_mode", pvalue_mode_name(r.test_config.pvalue_mode_univariate)},
                     {"seed", r.test_config.master_seed},
                     {"max_arity", r.search_config.max_arity},
                     {"max_rows", r.search_config.max_rows},
                     {"budget_beta", r.search_config.budget_beta},
                     {"hard_apriori", r.search_config.hard_apriori},
                     {"include_identity", r.search_config.include_identity_pairs}};
    doc["columns"] = {{"left", r.left_columns}, {"right", r.right_columns}};
    doc["levels"] = json::array();
    for (const auto& lv : r.levels)
        doc["levels"].push_back({{"arity", lv.arity},
                                 {"generated", lv.generated},
                                 {"tested", lv.tested},
                                 {"accepted", lv.accepted},
                                 {"rejected", lv.rejected},
                                 {"pruned", lv.pruned},
                                 {"skipped", lv.skipped}});
    doc["maximal"] = json::array();
    for (const auto& m : r.maximal)
        doc["maximal"].push_back({{"pairs", pairs_to_json(m.pairs, r.left_columns, r.right_columns)},
                                  {"statistic", m.outcome.statistic},
                                  {"p_value", m.outcome.p_value}});
    doc["anomalies"] = json::array();
    for (const auto& a : r.anomalies)
        doc["anomalies"].push_back(
            {{"pairs", pairs_to_json(a.candidate, r.left_columns, r.right_columns)},
             {"p_value", a.outcome.p_value},
             {"accepted_generalization",
              pairs_to_json(a.accepted_generalization, r.left_columns, r.right_columns)}});
    doc["audit"] = json::array();
    for (const auto& row : r.audit)
        doc["audit"].push_back({{"pairs", pairs_to_json(row.candidate, r.left_columns, r.right_columns)},
                                {"arity_k", row.arity_k},
                                {"n_projections", row.n_projections},
                                {"observed", row.observed},
                                {"expected", row.expected},
                                {"tail", row.tail},
                                {"consistent", row.consistent}});
    doc["runtime_ms"] = r.runtime_ms;
    return doc;
}

DiscoveryReport report_from_json(const json& doc) {
    DiscoveryReport r;
    const auto& cfg = doc.at("config");
    r.left_name = cfg.at("left").get<std::string>();
    r.right_name = cfg.at("right").get<std::string>();
    r.test_config.alpha = cfg.at("alpha").get<double>();
    r.test_config.univariate_test = cfg.at("test").get<std::string>() == "wilcoxon"
                                        ? UnivariateTest::Wilcoxon
                                        : UnivariateTest::KS;
    r.test_config.permutations = cfg.at("perms").get<int>();
    r.test_config.pvalue_mode_univariate = cfg.at("pvalue_mode").get<std::string>() == "permutation"
                                               ? PValueMode::Permutation
                                               : PValueMode::Asymptotic;
    r.test_config.master_seed = cfg.at("seed").get<std::uint64_t>();
    r.search_config.max_arity = cfg.at("max_arity").get<std::size_t>();
    r.search_config.max_rows = cfg.at("max_rows").get<std::size_t>();
    r.search_config.budget_beta = cfg.at("budget_beta").get<double>();
    r.search_config.hard_apriori = cfg.at("hard_apriori").get<bool>();
    r.search_config.include_identity_pairs = cfg.at("include_identity").get<bool>();
    r.search_config.alpha = r.test_config.alpha;
    r.left_columns = doc.at("columns").at("left").get<std::vector<std::string>>();
    r.right_columns = doc.at("columns").at("right").get<std::vector<std::string>>();
    for (const auto& lv : doc.at("levels")) {
        LevelTally t;
        t.arity = lv.at("arity").get<std::size_t>();
        t.generated = lv.at("generated").get<std::size_t>();
        t.tested = lv.at("tested").get<std::size_t>();
        t.accepted = lv.at("accepted").get<std::size_t>();
        t.rejected = lv.at("rejected").get<std::size_t>();
        t.pruned = lv.at("pruned").get<std::size_t>();
        t.skipped = lv.at("skipped").get<std::size_t>();
        r.levels.push_back(t);
    }
    for (const auto& m : doc.at("maximal")) {
        MaximalEntry e;
        e.pairs = pairs_from_json(m.at("pairs"), r.left_columns, r.right_columns);
        e.outcome.statistic = m.at("statistic").get<double>();
        e.outcome.p_value = m.at("p_value").get<double>();
        r.maximal.push_back(std::move(e));
    }
    for (const auto& a : doc.at("anomalies")) {
        AnomalyRecord rec;
        rec.candidate = pairs_from_json(a.at("pairs"), r.left_columns, r.right_columns);
        rec.outcome.p_value = a.at("p_value").get<double>();
        rec.outcome.rejected = true;
        rec.accepted_generalization =
            pairs_from_json(a.at("accepted_generalization"), r.left_columns, r.right_columns);
        r.anomalies.push_back(std::move(rec));
    }
    for (const auto& row : doc.at("audit")) {
        AuditRow ar;
        ar.candidate = pairs_from_json(row.at("pairs"), r.left_columns, r.right_columns);
        ar.arity_k = row.at("arity_k").get<std::size_t>();
        ar.n_projections = row.at("n_projections").get<std::size_t>();
        ar.observed = row.at("observed").get<std::size_t>();
        ar.expected = row.at("expected").get<double>();
        ar.tail = row.at("tail").get<double>();
        ar.consistent = row.at("consistent").get<bool>();
        r.audit.push_back(std::move(ar));
    }
    r.runtime_ms = doc.at("runtime_ms").get<std::int64_t>();
    return r;
}

json validation_to_json(const ValidateSummary& s) {
    json doc;
    doc["config"] = {{"trials", s.config.trials}, {"rows", s.config.rows},
                     {"dims", s.config.dims},    {"perms", s.config.permutations},
                     {"alpha", s.config.alpha},  {"seed", s.config.seed}};
    doc["n_projections"] = s.n_projections;
    doc["trials"] = json::array();
    for (const auto& t : s.trials)
        doc["trials"].push_back({{"seed", t.seed},
                                 {"observed", t.observed_rejections},
                                 {"full_pairing_accepted", t.full_pairing_accepted},
                                 {"anomalies", t.anomalies},
                                 {"overwrite_violations", t.overwrite_violations},
                                 {"audit_tail", t.audit_tail}});
    doc["mean_observed"] = s.mean_observed;
    doc["expected"] = s.expected;
    doc["band"] = {s.band_lo, s.band_hi};
    doc["consistent"] = s.consistent;
    doc["runtime_ms"] = s.runtime_ms;
    return doc;
}

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw IoError("write failure on " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw IoError("cannot rename " + tmp.string() + " to " + path.string());
    }
}

}  // namespace eqmine
