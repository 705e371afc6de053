#include "eqmine/cli.hpp"

#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "eqmine/errors.hpp"
#include "eqmine/report.hpp"
#include "eqmine/search.hpp"
#include "eqmine/stats.hpp"
#include "eqmine/synth.hpp"
#include "eqmine/validate.hpp"

namespace eqmine {

namespace {

char parse_delimiter(const std::string& s) {
    if (s == "comma" || s == ",") return ',';
    if (s == "tab" || s == "\\t" || s == "\t") return '\t';
    if (s == "semicolon" || s == ";") return ';';
    if (s.size() == 1) return s[0];
    throw ConfigError("unsupported delimiter: " + s);
}

HeaderMode parse_header_mode(const std::string& s) {
    if (s == "auto") return HeaderMode::Auto;
    if (s == "present") return HeaderMode::Present;
    if (s == "absent") return HeaderMode::Absent;
    throw ConfigError("unsupported header mode: " + s);
}

struct CommonFlags {
    std::string left_path;
    std::string right_path;
    double alpha = 0.05;
    std::string test = "ks";
    int perms = 199;
    std::string pvalue_mode = "asymptotic";
    std::size_t max_arity = 4;
    std::size_t max_rows = 2000;
    std::uint64_t seed = 1;
    double budget_beta = 0.01;
    bool hard_apriori = false;
    bool include_identity = false;
    std::string delimiter = ",";
    std::string header = "auto";
    std::string output;
    bool zscore = false;
};

void add_test_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--alpha", f.alpha, "significance level per test");
    cmd->add_option("--test", f.test, "univariate test: ks or wilcoxon")
        ->check(CLI::IsMember({"ks", "wilcoxon"}));
    cmd->add_option("--perms", f.perms, "permutation count B");
    cmd->add_option("--pvalue-mode", f.pvalue_mode,
                    "univariate p-value mode: asymptotic or permutation")
        ->check(CLI::IsMember({"asymptotic", "permutation"}));
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--max-rows", f.max_rows, "subsample cap per side (0 = no cap)");
    cmd->add_flag("--zscore", f.zscore,
                  "pooled per-column standardization before testing (alters the hypothesis)");
}

void add_io_flags(CLI::App* cmd, CommonFlags& f, bool right_required = true) {
    cmd->add_option("--left", f.left_path, "left relation file")->required();
    cmd->add_option("--right", f.right_path, "right relation file")->required(right_required);
    cmd->add_option("--delimiter", f.delimiter, "field delimiter (comma, tab, semicolon)");
    cmd->add_option("--header", f.header, "header handling: auto, present, absent")
        ->check(CLI::IsMember({"auto", "present", "absent"}));
}

TestConfig make_test_config(const CommonFlags& f) {
    TestConfig cfg;
    cfg.alpha = f.alpha;
    cfg.univariate_test = f.test == "wilcoxon" ? UnivariateTest::Wilcoxon : UnivariateTest::KS;
    cfg.permutations = f.perms;
    cfg.pvalue_mode_univariate =
        f.pvalue_mode == "permutation" ? PValueMode::Permutation : PValueMode::Asymptotic;
    cfg.master_seed = f.seed;
    cfg.pooled_zscore = f.zscore;
    cfg.validate();
    return cfg;
}

void emit(const json& doc, const std::string& output_path) {
    std::string text = doc.dump(2);
    text.push_back('\n');
    if (output_path.empty()) {
        std::cout << text;
    } else {
        atomic_write_file(output_path, text);
    }
}

PairSet resolve_pairs(const std::string& spec, const Relation& left, const Relation& right) {
    std::vector<ColumnPair> pairs;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        std::size_t comma = spec.find(',', pos);
        std::string item = spec.substr(pos, comma == std::string::npos ? comma : comma - pos);
        std::size_t colon = item.find(':');
        if (item.empty() || colon == std::string::npos || colon == 0 || colon + 1 == item.size())
            throw ConfigError("malformed pair '" + item + "', expected LEFT:RIGHT");
        std::string lname = item.substr(0, colon);
        std::string rname = item.substr(colon + 1);
        auto li = left.column_index(lname);
        if (!li) throw ConfigError("unknown left column: " + lname);
        auto ri = right.column_index(rname);
        if (!ri) throw ConfigError("unknown right column: " + rname);
        pairs.push_back({static_cast<std::uint32_t>(*li), static_cast<std::uint32_t>(*ri)});
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return canonicalize(std::move(pairs));
}

int cmd_discover(const CommonFlags& f) {
    LoadOptions lo{parse_delimiter(f.delimiter), parse_header_mode(f.header)};
    Relation left = load_relation(f.left_path, lo);
    Relation right_storage;
    const Relation* right = &left;  // same path means the same relation
    if (f.right_path != f.left_path) {
        right_storage = load_relation(f.right_path, lo);
        right = &right_storage;
    }

    TestConfig tcfg = make_test_config(f);
    SearchConfig scfg;
    scfg.max_arity = f.max_arity;
    scfg.budget_beta = f.budget_beta;
    scfg.hard_apriori = f.hard_apriori;
    scfg.alpha = f.alpha;
    scfg.include_identity_pairs = f.include_identity;
    scfg.max_rows = f.max_rows;
    scfg.validate();

    DiscoveryReport report = discover(left, *right, tcfg, scfg);
    report.left_name = f.left_path;
    report.right_name = f.right_path;
    emit(report_to_json(report), f.output);
    return 0;
}

int cmd_test(const CommonFlags& f, const std::string& pairs_spec) {
    LoadOptions lo{parse_delimiter(f.delimiter), parse_header_mode(f.header)};
    Relation left = load_relation(f.left_path, lo);
    Relation right_storage;
    const Relation* right = &left;
    if (f.right_path != f.left_path) {
        right_storage = load_relation(f.right_path, lo);
        right = &right_storage;
    }

    PairSet p = resolve_pairs(pairs_spec, left, *right);
    TestConfig tcfg = make_test_config(f);
    auto view = candidate_view(left, *right, p, f.max_rows,
                               candidate_seed(tcfg.master_seed, p, kSeedSaltView));
    TestOutcome outcome = test_candidate(view, p, tcfg);
    emit(outcome_to_json(outcome), f.output);
    return 0;
}

struct ValidateFlags {
    std::size_t trials = 5;
    std::size_t rows = 200;
    std::size_t dims = 10;
    int perms = 99;
    double alpha = 0.1;
    std::uint64_t seed = 1;
    std::string output;
};

int cmd_validate(const ValidateFlags& f) {
    ValidateConfig cfg;
    cfg.trials = f.trials;
    cfg.rows = f.rows;
    cfg.dims = f.dims;
    cfg.permutations = f.perms;
    cfg.alpha = f.alpha;
    cfg.seed = f.seed;
    ValidateSummary summary = run_validation(cfg);
    json doc = validation_to_json(summary);
    std::cout << doc.dump(2) << '\n';
    if (!f.output.empty()) atomic_write_file(f.output, doc.dump(2) + "\n");
    if (!summary.consistent) {
        std::cerr << "validate: mean observed rejections " << summary.mean_observed
                  << " outside band [" << summary.band_lo << ", " << summary.band_hi << "]\n";
        return 1;
    }
    return 0;
}

struct SynthFlags {
    std::string family = "fig1";
    std::size_t rows = 500;
    std::size_t dims = 2;
    double rho = 0.5;
    double delta = 0.0;
    std::uint64_t seed = 1;
    std::string output = ".";
    std::string delimiter = ",";
};

int cmd_synth(const SynthFlags& f) {
    std::pair<Relation, Relation> generated;
    if (f.family == "fig1") {
        generated = gen_fig1_scenario(f.rows, f.seed);
    } else if (f.family == "shifted") {
        generated = gen_shifted_pair(f.rows, f.dims, f.delta, f.seed);
    } else {
        static const std::map<std::string, Family> families = {
            {"gauss-iid", Family::GaussIid},
            {"gauss-corr", Family::GaussCorr},
            {"mixture", Family::Mixture},
            {"ring", Family::Ring},
        };
        auto it = families.find(f.family);
        if (it == families.end()) throw ConfigError("unknown family: " + f.family);
        ScenarioSpec spec{f.rows, f.seed, it->second, f.rho, f.dims};
        generated = gen_null_pair(spec);
    }
    namespace fs = std::filesystem;
    fs::path dir(f.output);
    std::error_code ec;
    fs::create_directories(dir, ec);
    char delim = parse_delimiter(f.delimiter);
    write_relation(generated.first, dir / "R.csv", delim);
    write_relation(generated.second, dir / "S.csv", delim);
    std::cout << (dir / "R.csv").string() << '\n' << (dir / "S.csv").string() << '\n';
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"eqmine: discovery of equally distributed attribute sets between two relations"};
    app.require_subcommand(1);

    CommonFlags discover_flags;
    auto* discover_cmd =
        app.add_subcommand("discover", "levelwise discovery of maximal equally distributed pairings");
    add_io_flags(discover_cmd, discover_flags);
    add_test_flags(discover_cmd, discover_flags);
    discover_cmd->add_option("--max-arity", discover_flags.max_arity, "largest pairing size tested");
    discover_cmd->add_option("--budget-beta", discover_flags.budget_beta,
                             "rejection-budget threshold (0 disables pruning)");
    discover_cmd->add_flag("--hard-apriori", discover_flags.hard_apriori,
                           "classical hard pruning baseline (statistically unsound)");
    discover_cmd->add_flag("--include-identity", discover_flags.include_identity,
                           "keep identity pairs in same-relation discovery");
    discover_cmd->add_option("--output", discover_flags.output, "report file (default: stdout)");

    CommonFlags test_flags;
    std::string pairs_spec;
    auto* test_cmd = app.add_subcommand("test", "test one explicit candidate pairing");
    add_io_flags(test_cmd, test_flags);
    add_test_flags(test_cmd, test_flags);
    test_cmd->add_option("--pairs", pairs_spec, "candidate, e.g. A:C,B:D")->required();
    test_cmd->add_option("--output", test_flags.output, "outcome file (default: stdout)");

    ValidateFlags validate_flags;
    auto* validate_cmd =
        app.add_subcommand("validate", "expected-rejection count check on synthetic null data");
    validate_cmd->add_option("--trials", validate_flags.trials, "number of seeded trials");
    validate_cmd->add_option("--rows", validate_flags.rows, "rows per relation");
    validate_cmd->add_option("--dims", validate_flags.dims, "columns per relation");
    validate_cmd->add_option("--perms", validate_flags.perms, "permutation count B");
    validate_cmd->add_option("--alpha", validate_flags.alpha, "significance level");
    validate_cmd->add_option("--seed", validate_flags.seed, "master seed");
    validate_cmd->add_option("--output", validate_flags.output, "summary file");

    SynthFlags synth_flags;
    auto* synth_cmd = app.add_subcommand("synth", "write synthetic scenario files R.csv and S.csv");
    synth_cmd->add_option("--family", synth_flags.family,
                          "fig1, gauss-iid, gauss-corr, mixture, ring, shifted");
    synth_cmd->add_option("--rows", synth_flags.rows, "rows per relation");
    synth_cmd->add_option("--dims", synth_flags.dims, "columns per relation");
    synth_cmd->add_option("--rho", synth_flags.rho, "equicorrelation for gauss-corr");
    synth_cmd->add_option("--delta", synth_flags.delta, "per-column shift for shifted");
    synth_cmd->add_option("--seed", synth_flags.seed, "generator seed");
    synth_cmd->add_option("--output", synth_flags.output, "output directory");
    synth_cmd->add_option("--delimiter", synth_flags.delimiter, "field delimiter");

    std::vector<const char*> argv;
    argv.push_back("eqmine");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (discover_cmd->parsed()) return cmd_discover(discover_flags);
        if (test_cmd->parsed()) return cmd_test(test_flags, pairs_spec);
        if (validate_cmd->parsed()) return cmd_validate(validate_flags);
        if (synth_cmd->parsed()) return cmd_synth(synth_flags);
    } catch (const ConfigError& e) {
        std::cerr << "eqmine: " << e.what() << '\n';
        return 2;
    } catch (const EmptyPairSet& e) {
        std::cerr << "eqmine: " << e.what() << '\n';
        return 2;
    } catch (const DuplicateLeft& e) {
        std::cerr << "eqmine: " << e.what() << '\n';
        return 2;
    } catch (const DuplicateRight& e) {
        std::cerr << "eqmine: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "eqmine: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "eqmine: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace eqmine
