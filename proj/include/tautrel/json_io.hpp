#pragma once

/** @file json_io.hpp
 *  @brief Deterministic JSON and plain-text renderings of relation reports.
 *
 *  Rationals are always rendered exactly as "p" or "p/q" strings, never as
 *  floats; key order is fixed, so identical reports serialize to identical
 *  bytes.
 */

#include "tautrel/relation.hpp"

#include <json.hpp>

namespace tautrel {

namespace detail {

inline nlohmann::ordered_json rationals_json(const std::vector<Rational>& v)
{
    auto out = nlohmann::ordered_json::array();
    for (const auto& c : v)
        out.push_back(to_fraction_string(c));
    return out;
}

inline nlohmann::ordered_json pattern_json(const std::vector<int>& pattern)
{
    auto out = nlohmann::ordered_json::array();
    for (int side : pattern)
        out.push_back(side == 0 ? "0" : "inf");
    return out;
}

} // namespace detail

inline nlohmann::ordered_json report_to_json(const RelationReport& report)
{
    nlohmann::ordered_json j;
    j["parameters"] = {{"genus", report.genus},
                       {"marks", report.marks},
                       {"degree", report.degree},
                       {"depth", report.depth},
                       {"insertions", detail::pattern_json(report.pattern)}};
    j["basis"]      = report.basis_names;

    auto loci = nlohmann::ordered_json::array();
    for (const auto& rec : report.loci) {
        nlohmann::ordered_json entry;
        if (!rec.name.empty())
            entry["name"] = rec.name;
        entry["canonical_form"] = rec.canonical_form;
        entry["factors"]        = rec.fingerprint;
        entry["N_F"]            = rec.n_f;
        entry["prefactor"]      = to_fraction_string(rec.prefactor);
        entry["contribution"]   = detail::rationals_json(rec.contribution.coords);
        loci.push_back(std::move(entry));
    }
    j["loci"]  = std::move(loci);
    j["total"] = detail::rationals_json(report.total.coords);
    if (!report.warnings.empty())
        j["warnings"] = report.warnings;

    if (report.headline) {
        j["matches_getzler"] = report.matches_getzler();
        if (report.getzler_multiple)
            j["getzler_multiple"] = to_fraction_string(*report.getzler_multiple);
    } else {
        j["matches_getzler"] = nullptr;
    }
    return j;
}

inline std::string render_report_text(const RelationReport& report)
{
    std::ostringstream out;
    out << "relation: genus " << report.genus << ", marks " << report.marks
        << ", degree " << report.degree << ", depth " << report.depth
        << ", insertions ";
    for (size_t i = 0; i < report.pattern.size(); ++i)
        out << (i ? "," : "") << (report.pattern[i] == 0 ? "0" : "inf");
    out << "\nbasis:";
    for (const auto& name : report.basis_names)
        out << " " << name;
    out << "\n\n";

    for (const auto& rec : report.loci) {
        out << "locus " << (rec.name.empty() ? rec.fingerprint : rec.name)
            << "\n  factors      " << rec.fingerprint
            << "\n  N_F          " << rec.n_f
            << "\n  prefactor    " << to_fraction_string(rec.prefactor)
            << "\n  contribution " << detail::render_vector(rec.contribution.coords)
            << "\n";
    }
    out << "\ntotal " << detail::render_vector(report.total.coords) << "\n";
    for (const auto& warning : report.warnings)
        out << "warning: " << warning << "\n";
    if (report.headline) {
        if (report.getzler_multiple)
            out << "Getzler check: total = "
                << to_fraction_string(*report.getzler_multiple)
                << " x (12, -4, -2, 6, 0, 1, 1, -2) -> PASS\n";
        else
            out << "Getzler check: total is not a multiple of "
                   "(12, -4, -2, 6, 0, 1, 1, -2) -> FAIL\n";
    }
    return out.str();
}

} // namespace tautrel
