/** @file tautrel_cli.cpp
 *  @brief Command-line front end: enumerate fixed loci, inspect per-locus
 *         Euler factorizations, compute the boundary-strata relation, and
 *         run the self-test suite.
 *
 *  Exit codes: 0 on success (for the headline genus-1 four-mark degree-2
 *  run, success additionally requires the total to equal four times
 *  Getzler's vector); 1 on a verification failure; 2 on a configuration
 *  error.  Identical configurations produce byte-identical output.
 */

#include "tautrel/json_io.hpp"
#include "tautrel/relation.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>

namespace {

using namespace tautrel;

struct CliConfig {
    int         genus  = 0;
    int         marks  = 0;
    int         degree = 0;
    int         depth  = 2;
    std::string insertions;  ///< comma-separated 0|inf, empty = balanced
    std::string format = "text";
    std::string out;
    std::string locus_filter;
    bool        parallel = false;
    int64_t     rule_seed = -1;
    bool        flip_deg2_edge_sign = false;
    bool        flip_tangent_sign   = false;
    std::string insertion_scale     = "1";
};

std::vector<int> parse_pattern(const CliConfig& cfg)
{
    if (cfg.insertions.empty())
        return default_pattern(cfg.marks);
    std::vector<int> pattern;
    std::string      token;
    std::stringstream in(cfg.insertions);
    while (std::getline(in, token, ',')) {
        if (token == "0")
            pattern.push_back(0);
        else if (token == "inf")
            pattern.push_back(1);
        else
            throw std::invalid_argument("insertions must be a comma-separated "
                                        "list of 0 or inf, got '" +
                                        token + "'");
    }
    if (static_cast<int>(pattern.size()) != cfg.marks)
        throw std::invalid_argument(
            "insertions list a side for each of the " +
            std::to_string(cfg.marks) + " marks");
    return pattern;
}

RelationOptions relation_options(const CliConfig& cfg)
{
    RelationOptions opts;
    opts.parallel                    = cfg.parallel;
    opts.perturb.flip_deg2_edge_sign = cfg.flip_deg2_edge_sign;
    opts.perturb.flip_tangent_sign   = cfg.flip_tangent_sign;
    opts.perturb.insertion_scale = rational_from_string(cfg.insertion_scale);
    if (cfg.rule_seed >= 0)
        opts.rule_seed = static_cast<uint32_t>(cfg.rule_seed);
    return opts;
}

/// Write to --out when given, stdout otherwise.
void emit(const std::string& body, const std::string& out_path)
{
    if (out_path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw std::invalid_argument("cannot open output file '" + out_path +
                                    "'");
    out << body;
}

std::string pattern_label(const std::vector<int>& pattern)
{
    if (pattern.empty())
        return "none";
    std::string label;
    for (size_t i = 0; i < pattern.size(); ++i)
        label += std::string(i ? "," : "") + (pattern[i] == 0 ? "0" : "inf");
    return label;
}

// ---------------------------------------------------------------------------
// loci: list every unlabelled fixed locus of the mapping space
// ---------------------------------------------------------------------------

int run_loci(const CliConfig& cfg)
{
    const auto pattern = parse_pattern(cfg);
    const auto loci    = enumerate_fixed_loci(cfg.genus, cfg.marks, cfg.degree);

    struct Row {
        const UnlabelledLocus* locus;
        std::string            factors;
        int                    dim;
        int                    n_f;
    };
    std::vector<Row> rows;
    long             contributing = 0;
    for (const auto& u : loci) {
        Row row{&u, factor_fingerprint(u.graph),
                parametrizing_space(u.graph).dim(),
                count_compatible_labelings(u, pattern)};
        contributing += row.n_f > 0;
        rows.push_back(std::move(row));
    }

    if (cfg.format == "json") {
        auto array = nlohmann::ordered_json::array();
        for (const auto& row : rows) {
            nlohmann::ordered_json entry;
            entry["canonical_form"] = row.locus->canonical_form;
            entry["factors"]        = row.factors;
            entry["dim"]            = row.dim;
            entry["N_F"]            = row.n_f;
            entry["contributing"]   = row.n_f > 0;
            array.push_back(std::move(entry));
        }
        emit(array.dump(2) + "\n", cfg.out);
        return 0;
    }

    std::ostringstream text;
    text << "fixed loci for genus " << cfg.genus << ", marks " << cfg.marks
         << ", degree " << cfg.degree << " (insertions "
         << pattern_label(pattern) << ")\n\n";
    for (const auto& row : rows)
        text << (row.n_f > 0 ? "  * " : "    ") << row.locus->canonical_form
             << "\n      factors " << row.factors << "  dim " << row.dim
             << "  N_F " << row.n_f << "\n";
    text << "\n" << rows.size()
         << (rows.size() == 1 ? " unlabelled locus, " : " unlabelled loci, ")
         << contributing << " contributing (*)\n";
    emit(text.str(), cfg.out);
    return 0;
}

// ---------------------------------------------------------------------------
// contrib: per-locus Euler factorization and extracted class
// ---------------------------------------------------------------------------

int run_contrib(const CliConfig& cfg)
{
    const auto pattern = parse_pattern(cfg);
    const auto opts    = relation_options(cfg);

    std::optional<DeltaBasis> basis;
    try {
        basis = DeltaBasis::for_target(cfg.genus, cfg.marks);
    } catch (const std::domain_error&) {
        // No stratum dictionary for this target: factorizations only.
    }

    struct Block {
        LocusRecord        record;
        EulerFactorization factorization;
        TautElement        cls;
    };
    std::vector<Block> blocks;
    for (const auto& u : enumerate_fixed_loci(cfg.genus, cfg.marks,
                                              cfg.degree)) {
        const auto classes = labelled_classes(u, pattern);
        if (classes.empty())
            continue;
        LocusRecord record;
        if (basis) {
            record = locus_record(u, pattern, cfg.depth, *basis, opts);
        } else {
            record.canonical_form = u.canonical_form;
            record.fingerprint    = factor_fingerprint(u.graph);
            record.n_f            = static_cast<long>(classes.size());
            record.prefactor =
                Rational(1) / Rational(automorphism_count(classes.front()));
        }
        if (!cfg.locus_filter.empty() &&
            cfg.locus_filter != record.name &&
            cfg.locus_filter != record.canonical_form &&
            cfg.locus_filter != record.fingerprint)
            continue;
        blocks.push_back({std::move(record), euler_normal(classes.front(),
                                                          opts.perturb),
                          contribution_class(classes.front(), pattern,
                                             cfg.depth, opts.perturb)});
    }
    if (blocks.empty())
        throw std::invalid_argument(
            cfg.locus_filter.empty()
                ? "no locus admits a labeling compatible with the insertions"
                : "no contributing locus matches '" + cfg.locus_filter + "'");

    if (cfg.format == "json") {
        auto array = nlohmann::ordered_json::array();
        for (const auto& block : blocks) {
            nlohmann::ordered_json entry;
            if (!block.record.name.empty())
                entry["name"] = block.record.name;
            entry["canonical_form"] = block.record.canonical_form;
            entry["factors"]        = block.record.fingerprint;
            entry["N_F"]            = block.record.n_f;
            auto numerator          = nlohmann::ordered_json::array();
            for (const auto& f : block.factorization.numerator)
                numerator.push_back(f.rendered);
            auto denominator = nlohmann::ordered_json::array();
            for (const auto& f : block.factorization.denominator)
                denominator.push_back(f.rendered);
            entry["euler_numerator"]   = std::move(numerator);
            entry["euler_denominator"] = std::move(denominator);
            entry["class"]             = block.cls.to_string();
            entry["prefactor"] = to_fraction_string(block.record.prefactor);
            if (basis)
                entry["contribution"] =
                    detail::rationals_json(block.record.contribution.coords);
            array.push_back(std::move(entry));
        }
        emit(array.dump(2) + "\n", cfg.out);
        return 0;
    }

    std::ostringstream text;
    text << "per-locus contributions for genus " << cfg.genus << ", marks "
         << cfg.marks << ", degree " << cfg.degree << " (insertions "
         << pattern_label(pattern) << ", depth " << cfg.depth << ")\n";
    for (const auto& block : blocks) {
        text << "\nlocus "
             << (block.record.name.empty() ? block.record.canonical_form
                                           : block.record.name)
             << "\n  canonical   " << block.record.canonical_form
             << "\n  factors     " << block.record.fingerprint
             << "\n  N_F         " << block.record.n_f
             << "\n  e(normal), representative labelled class:\n";
        for (const auto& f : block.factorization.numerator)
            text << "    x  " << f.rendered << "\n";
        for (const auto& f : block.factorization.denominator)
            text << "    /  " << f.rendered << "\n";
        text << "  hbar^0 class " << block.cls.to_string() << "\n  prefactor   "
             << to_fraction_string(block.record.prefactor) << "\n";
        if (basis)
            text << "  contribution "
                 << detail::render_vector(block.record.contribution.coords)
                 << "\n";
    }
    emit(text.str(), cfg.out);
    return 0;
}

// ---------------------------------------------------------------------------
// relation: the full localization sum with the Getzler check
// ---------------------------------------------------------------------------

int run_relation(const CliConfig& cfg)
{
    const auto pattern = parse_pattern(cfg);
    const auto report  = compute_relation(cfg.genus, cfg.marks, cfg.degree,
                                          pattern, cfg.depth,
                                          relation_options(cfg));
    for (const auto& warning : report.warnings)
        std::cerr << "warning: " << warning << "\n";

    if (cfg.format == "json")
        emit(report_to_json(report).dump(2) + "\n", cfg.out);
    else
        emit(render_report_text(report), cfg.out);

    if (!report.headline)
        return 0;
    std::vector<Rational> expected;
    for (const auto& c : getzler_vector())
        expected.push_back(4 * c);
    return report.total.coords == expected ? 0 : 1;
}

// ---------------------------------------------------------------------------
// selftest: reference tables plus the property suites
// ---------------------------------------------------------------------------

bool series_inversion_roundtrip()
{
    using QS = HbarSeries<Rational>;
    std::mt19937                    rng(20260819u);
    std::uniform_int_distribution<> coeff_dist(-9, 9);
    std::uniform_int_distribution<> top_dist(-3, 4);
    std::uniform_int_distribution<> len_dist(1, 5);
    std::uniform_int_distribution<> den_dist(1, 7);

    for (int trial = 0; trial < 1000; ++trial) {
        const int top = top_dist(rng);
        const int len = len_dist(rng);
        QS        a   = QS::monomial(top, 1);
        for (int i = 1; i < len; ++i)
            a = series_add(
                a, QS::monomial(top - i, Rational(coeff_dist(rng),
                                                  den_dist(rng))));
        const QS inv  = series_invert(a, Window{top - len - 8, kWindowAllHigh});
        const QS prod = series_mul(a, inv);
        if (coefficient(prod, 0) != 1)
            return false;
        for (int k = std::max(prod.low, 2 * top - len - 8); k <= top + 2; ++k)
            if (k != 0 && coefficient(prod, k) != 0)
                return false;
    }
    return true;
}

bool vanishing_rules_hold()
{
    // The square of the Hodge class kills a genus-one stratum.
    DecoratedStratum squared;
    squared.coeff = 1;
    DecoratedVertex elliptic;
    elliptic.genus  = 1;
    elliptic.points = {Point::mark(1)};
    elliptic.lambda = 2;
    squared.vertices.push_back(elliptic);
    if (!reduce(squared).empty())
        return false;

    // A cotangent class on a three-pointed rational vertex vanishes.
    DecoratedStratum psi;
    psi.coeff = 1;
    DecoratedVertex rational;
    rational.genus  = 0;
    rational.points = {Point::mark(1), Point::mark(2), Point::mark(3)};
    rational.psi[Point::mark(1)] = 1;
    psi.vertices.push_back(rational);
    return reduce(psi).empty();
}

bool homogeneity_holds()
{
    struct Run {
        int genus, marks, degree, codim_shift;
    };
    for (const Run run : {Run{1, 4, 2, 2}, Run{0, 4, 2, 0}}) {
        const auto pattern = default_pattern(run.marks);
        for (const auto& u : enumerate_fixed_loci(run.genus, run.marks,
                                                  run.degree))
            for (const auto& labelled : labelled_classes(u, pattern)) {
                const TautElement cls =
                    contribution_class(labelled, pattern, 2);
                if (cls.is_zero())
                    continue;
                int degree = -1;
                if (!cls.is_homogeneous(&degree) ||
                    degree !=
                        parametrizing_space(labelled).dim() - run.codim_shift)
                    return false;
            }
    }
    return true;
}

int run_selftest()
{
    int  failures = 0;
    auto line     = [&](const std::string& name, bool pass,
                        const std::string& detail = "") {
        std::cout << (pass ? "PASS" : "FAIL") << "  " << name;
        if (!detail.empty())
            std::cout << "  (" << detail << ")";
        std::cout << "\n";
        failures += !pass;
    };

    const auto pattern  = default_pattern(4);
    const auto headline = compute_relation(1, 4, 2, pattern, 2);
    const auto table    = verify_against_table(headline);
    line("headline contribution table", table.pass,
         "table lines matched: " + std::to_string(table.matched_lines) +
             "/13");
    if (!table.diff.empty())
        std::cout << table.diff;

    line("Getzler relation total",
         headline.matches_getzler() &&
             *headline.getzler_multiple == Rational(4),
         "total = 4 x (12, -4, -2, 6, 0, 1, 1, -2)");

    const auto smoke       = compute_relation(0, 4, 2, pattern, 2);
    const auto smoke_check = verify_smoke_run(smoke);
    line("genus-zero smoke relation", smoke_check.pass,
         "smoke lines matched: " + std::to_string(smoke_check.matched_lines) +
             "/5, zero total");
    if (!smoke_check.diff.empty())
        std::cout << smoke_check.diff;

    line("series inversion round-trip", series_inversion_roundtrip(),
         "1000 random series");

    line("vanishing rules", vanishing_rules_hold(),
         "Hodge-squared and three-pointed cotangent");

    line("contribution-class homogeneity", homogeneity_holds(),
         "every labelled class, both runs");

    const auto baseline = report_to_json(headline).dump();
    bool       stable   = true;
    for (uint32_t seed = 1; seed <= 10 && stable; ++seed) {
        RelationOptions shuffled;
        shuffled.rule_seed = seed;
        stable = report_to_json(compute_relation(1, 4, 2, pattern, 2,
                                                 shuffled))
                     .dump() == baseline;
    }
    line("rewrite-order independence", stable, "10 shuffled schedules");

    RelationOptions parallel;
    parallel.parallel = true;
    line("parallel fan-out equals serial",
         report_to_json(compute_relation(1, 4, 2, pattern, 2, parallel))
                 .dump() == baseline);

    std::cout << "\nselftest: " << (8 - failures) << "/8 checks passed\n";
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{
        "tautrel: exact boundary-strata relations on moduli of curves via "
        "torus localization on stable maps to the projective line"};
    app.require_subcommand(1);
    CliConfig cfg;

    const auto add_target = [&](CLI::App* cmd) {
        cmd->add_option("--genus,-g", cfg.genus, "target curve genus")
            ->required();
        cmd->add_option("--marks,-n", cfg.marks, "number of marked points")
            ->required();
        cmd->add_option("--degree,-d", cfg.degree, "map degree")->required();
        cmd->add_option("--insertions", cfg.insertions,
                        "comma-separated evaluation side per mark, 0 or inf "
                        "(default: first half 0, second half inf)");
        cmd->add_option("--format", cfg.format, "output format")
            ->check(CLI::IsMember({"text", "json"}));
        cmd->add_option("--out", cfg.out, "write output to a file");
    };
    const auto add_engine = [&](CLI::App* cmd) {
        cmd->add_option("--depth", cfg.depth,
                        "hbar twist exponent (the relation lives at 2)");
        cmd->add_flag("--parallel", cfg.parallel,
                      "fan out across loci; results are identical");
        cmd->add_option("--rule-seed", cfg.rule_seed,
                        "shuffle the rewrite-site order with this seed");
        cmd->add_flag("--flip-deg2-edge-sign", cfg.flip_deg2_edge_sign,
                      "perturbation: negate the degree-2 cover factor");
        cmd->add_flag("--flip-tangent-sign", cfg.flip_tangent_sign,
                      "perturbation: flip the tangent weight at infinity");
        cmd->add_option("--insertion-scale", cfg.insertion_scale,
                        "rescale every evaluation class by this rational");
    };

    auto* loci = app.add_subcommand(
        "loci", "enumerate the unlabelled fixed loci of the mapping space");
    add_target(loci);

    auto* contrib = app.add_subcommand(
        "contrib",
        "per-locus Euler factorization and extracted contribution class");
    add_target(contrib);
    add_engine(contrib);
    contrib->add_option("--locus", cfg.locus_filter,
                        "restrict to one locus by name, canonical form, or "
                        "factor fingerprint");

    auto* relation = app.add_subcommand(
        "relation", "sum the per-locus contributions into the boundary "
                    "relation and check it");
    add_target(relation);
    add_engine(relation);

    app.add_subcommand("selftest",
                       "verify the reference tables and the property suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (loci->parsed())
            return run_loci(cfg);
        if (contrib->parsed())
            return run_contrib(cfg);
        if (relation->parsed())
            return run_relation(cfg);
        return run_selftest();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
