/** @file test_relation.cpp
 *  @brief End-to-end relation driver: reference table reproduction, the
 *         Getzler check, verification diagnostics, perturbation sensitivity,
 *         scheduling invariance, and report serialization.
 */

#include "tautrel/json_io.hpp"
#include "tautrel/relation.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <fstream>
#include <map>

using namespace tautrel;
using nlohmann::json;

namespace {

json load_golden(const std::string& name)
{
    std::ifstream in(std::string(TAUTREL_SOURCE_DIR) + "/tests/golden/" + name);
    REQUIRE(in.good());
    return json::parse(in);
}

std::vector<Rational> rationals(const json& array)
{
    std::vector<Rational> out;
    for (const auto& entry : array)
        out.push_back(rational_from_string(entry.get<std::string>()));
    return out;
}

const std::vector<int>& headline_pattern()
{
    static const std::vector<int> pattern{0, 0, 1, 1};
    return pattern;
}

RelationReport headline_report(const RelationOptions& opts = {})
{
    return compute_relation(1, 4, 2, headline_pattern(), 2, opts);
}

} // namespace

TEST_CASE("headline run reproduces the reference table")
{
    const auto report = headline_report();
    const auto golden = load_golden("table_1_4_2.json");

    REQUIRE(report.basis_names ==
            golden["basis"].get<std::vector<std::string>>());
    REQUIRE(report.loci.size() == golden["lines"].size());
    REQUIRE(report.warnings.empty());

    std::map<std::string, const LocusRecord*> by_name;
    for (const auto& rec : report.loci) {
        REQUIRE_FALSE(rec.name.empty());
        REQUIRE(by_name.emplace(rec.name, &rec).second);
    }
    for (const auto& line : golden["lines"]) {
        const auto it = by_name.find(line["name"].get<std::string>());
        REQUIRE(it != by_name.end());
        INFO("locus " << it->first);
        CHECK(it->second->contribution.coords == rationals(line["contribution"]));
    }
    CHECK(by_name.at("vee_1_1")->n_f == 2);

    CHECK(report.total.coords == rationals(golden["total"]));
    REQUIRE(report.headline);
    REQUIRE(report.matches_getzler());
    CHECK(*report.getzler_multiple ==
          rational_from_string(golden["getzler_multiple"].get<std::string>()));
}

TEST_CASE("headline verification matches all thirteen lines")
{
    const auto check = verify_against_table(headline_report());
    CHECK(check.pass);
    CHECK(check.matched_lines == 13);
    CHECK(check.diff.empty());
}

TEST_CASE("mirror loci contribute equal vectors")
{
    const auto report = headline_report();
    std::map<std::string, std::vector<Rational>> by_name;
    for (const auto& rec : report.loci)
        by_name.emplace(rec.name, rec.contribution.coords);
    for (const auto& line : detail::reference_table_1_4_2()) {
        INFO(line.name << " vs " << line.mirror);
        CHECK(by_name.at(line.name) == by_name.at(line.mirror));
    }
}

TEST_CASE("genus-zero smoke run is the zero relation")
{
    const auto report = compute_relation(0, 4, 2, headline_pattern(), 2);
    const auto golden = load_golden("smoke_0_4_2.json");

    REQUIRE(report.basis_names ==
            golden["basis"].get<std::vector<std::string>>());
    REQUIRE(report.loci.size() == golden["lines"].size());

    std::map<std::string, const LocusRecord*> by_factors;
    for (const auto& rec : report.loci)
        by_factors.emplace(rec.fingerprint, &rec);
    for (const auto& line : golden["lines"]) {
        const auto it = by_factors.find(line["factors"].get<std::string>());
        REQUIRE(it != by_factors.end());
        INFO("locus " << it->first);
        CHECK(it->second->contribution.coords == rationals(line["contribution"]));
    }

    CHECK(report.total.is_zero());
    CHECK_FALSE(report.headline);
    CHECK_FALSE(report.matches_getzler());

    const auto check = verify_smoke_run(report);
    CHECK(check.pass);
    CHECK(check.matched_lines == static_cast<long>(golden["lines"].size()));
    CHECK(check.diff.empty());
}

TEST_CASE("verification rejects reports from other configurations")
{
    const auto headline = headline_report();
    const auto smoke    = compute_relation(0, 4, 2, headline_pattern(), 2);

    CHECK_FALSE(verify_against_table(smoke).pass);
    CHECK_FALSE(verify_smoke_run(headline).pass);
}

TEST_CASE("flipping the degree-2 edge sign breaks the table")
{
    RelationOptions opts;
    opts.perturb.flip_deg2_edge_sign = true;
    const auto report                = headline_report(opts);

    const auto check = verify_against_table(report);
    CHECK_FALSE(check.pass);
    REQUIRE_FALSE(check.diff.empty());
    // The damage shows on loci containing a degree-2 edge.
    const bool mentions_deg2_locus =
        check.diff.find("top") != std::string::npos ||
        check.diff.find("bot") != std::string::npos ||
        check.diff.find("prod_1_1") != std::string::npos;
    CHECK(mentions_deg2_locus);
    CHECK(report.total.coords != headline_report().total.coords);
}

TEST_CASE("flipping the tangent-weight sign breaks the table")
{
    RelationOptions opts;
    opts.perturb.flip_tangent_sign = true;
    const auto report              = headline_report(opts);

    const auto check = verify_against_table(report);
    CHECK_FALSE(check.pass);
    CHECK_FALSE(check.diff.empty());
}

TEST_CASE("parallel fan-out and shuffled rule order leave the report unchanged")
{
    const auto baseline = report_to_json(headline_report()).dump(2);

    RelationOptions parallel;
    parallel.parallel = true;
    CHECK(report_to_json(headline_report(parallel)).dump(2) == baseline);

    for (uint32_t seed : {7u, 1234u}) {
        RelationOptions shuffled;
        shuffled.rule_seed = seed;
        INFO("rule seed " << seed);
        CHECK(report_to_json(headline_report(shuffled)).dump(2) == baseline);
    }
}

TEST_CASE("insertion rescaling acts with the fourth power")
{
    const auto clean = headline_report();

    RelationOptions opts;
    opts.perturb.insertion_scale = Rational(3) / 2;
    const auto scaled            = headline_report(opts);
    const auto factor            = rational_pow(Rational(3) / 2, 4);

    REQUIRE(scaled.loci.size() == clean.loci.size());
    for (size_t i = 0; i < clean.loci.size(); ++i) {
        INFO("locus " << clean.loci[i].canonical_form);
        CHECK(scaled.loci[i].canonical_form == clean.loci[i].canonical_form);
        CHECK(scaled.loci[i].n_f == clean.loci[i].n_f);
        CHECK(scaled.loci[i].prefactor == clean.loci[i].prefactor);
        CHECK(scaled.loci[i].contribution.coords ==
              (factor * clean.loci[i].contribution).coords);
    }
    CHECK(scaled.total.coords == (factor * clean.total).coords);
    // The total is still a (rescaled) multiple of the relation vector.
    REQUIRE(scaled.matches_getzler());
    CHECK(*scaled.getzler_multiple == factor * *clean.getzler_multiple);
}

TEST_CASE("per-locus contribution classes are degree homogeneous")
{
    struct Run {
        int genus, marks, degree;
        int codim_shift;  ///< dim L minus the class degree for this target
    };
    // On the genus-one target the relation lives in codimension two and
    // every nonzero class has degree dim L - 2; the genus-zero relation
    // lives among the boundary points of a one-dimensional target, where
    // the nonzero classes come out of degree dim L instead.
    for (const Run run : {Run{1, 4, 2, 2}, Run{0, 4, 2, 0}}) {
        const auto pattern = headline_pattern();
        for (const auto& u : enumerate_fixed_loci(run.genus, run.marks,
                                                  run.degree)) {
            for (const auto& labelled : labelled_classes(u, pattern)) {
                const TautElement cls =
                    contribution_class(labelled, pattern, 2);
                if (cls.is_zero())
                    continue;
                int degree = -1;
                INFO("locus " << u.canonical_form);
                REQUIRE(cls.is_homogeneous(&degree));
                CHECK(degree ==
                      parametrizing_space(labelled).dim() - run.codim_shift);
            }
        }
    }
}

TEST_CASE("configuration validation")
{
    CHECK_THROWS_AS(compute_relation(1, 4, 2, {0, 0, 1}, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(compute_relation(1, 4, 2, {0, 0, 1, 2}, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(compute_relation(1, 4, 2, headline_pattern(), -1),
                    std::invalid_argument);
}

TEST_CASE("depth outside the envelope warns instead of checking")
{
    const auto report = compute_relation(1, 4, 2, headline_pattern(), 1);
    CHECK_FALSE(report.headline);
    CHECK_FALSE(report.matches_getzler());
    REQUIRE(report.warnings.size() == 1);

    const auto j = report_to_json(report);
    REQUIRE(j.contains("warnings"));
    CHECK(j["matches_getzler"].is_null());

    const auto text = render_report_text(report);
    CHECK(text.find("warning:") != std::string::npos);
    CHECK(text.find("Getzler") == std::string::npos);
}

TEST_CASE("reports serialize deterministically with the fixed schema")
{
    const auto first  = report_to_json(headline_report());
    const auto second = report_to_json(headline_report());
    REQUIRE(first.dump(2) == second.dump(2));

    CHECK(first["parameters"]["genus"] == 1);
    CHECK(first["parameters"]["marks"] == 4);
    CHECK(first["parameters"]["degree"] == 2);
    CHECK(first["parameters"]["depth"] == 2);
    CHECK(first["parameters"]["insertions"] ==
          json::parse(R"(["0","0","inf","inf"])"));
    REQUIRE(first["loci"].is_array());
    for (const auto& entry : first["loci"]) {
        REQUIRE(entry.contains("canonical_form"));
        REQUIRE(entry.contains("N_F"));
        REQUIRE(entry.contains("prefactor"));
        REQUIRE(entry["contribution"].is_array());
        for (const auto& value : entry["contribution"])
            REQUIRE(value.is_string());
    }
    CHECK(first["matches_getzler"] == true);
    CHECK(first["getzler_multiple"] == "4");

    const auto text = render_report_text(headline_report());
    CHECK(text.find("-> PASS") != std::string::npos);
}
