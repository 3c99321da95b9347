/** @file walk_fixed_loci.cpp
 *  @brief A guided walk through the per-locus pipeline on one fixed locus:
 *         enumerate, pick the worked example, assemble its normal-bundle
 *         Euler factorization, extract the hbar^0 class, expand it into
 *         decorated strata, and push everything to the target space.
 *
 *  Run it to see each stage's size and the final basis coordinates; the
 *  chosen locus contributes 8 d23 - 12 d34 to the relation.
 */

#include "tautrel/relation.hpp"

#include <iostream>

int main()
{
    using namespace tautrel;

    const std::vector<int> pattern{0, 0, 1, 1};

    // Stage 1: enumerate the unlabelled torus-fixed loci of the space of
    // degree-two stable maps from four-pointed genus-one curves.
    const auto loci = enumerate_fixed_loci(1, 4, 2);
    long       contributing = 0;
    for (const auto& u : loci)
        contributing += count_compatible_labelings(u, pattern) > 0;
    std::cout << loci.size() << " unlabelled fixed loci, " << contributing
              << " compatible with the insertion pattern 0,0,inf,inf\n\n";

    // Stage 2: pick the locus whose parametrizing space is M(1,2) x M(0,4)
    // -- an elliptic tail over 0 joined to a four-pointed rational curve
    // over infinity by two degree-one edges.  The factor fingerprint alone
    // is shared with a non-contributing single-edge locus, so also require
    // a labeling compatible with the pattern.
    const UnlabelledLocus* chosen = nullptr;
    for (const auto& u : loci)
        if (factor_fingerprint(u.graph) == "0:M(1,2)*|inf:M(0,4)*" &&
            count_compatible_labelings(u, pattern) > 0)
            chosen = &u;
    if (chosen == nullptr) {
        std::cerr << "the expected locus is missing from the enumeration\n";
        return 1;
    }
    std::cout << "locus " << chosen->canonical_form << "\n  factors "
              << factor_fingerprint(chosen->graph) << ", dimension "
              << parametrizing_space(chosen->graph).dim() << "\n";

    const auto classes = labelled_classes(*chosen, pattern);
    std::cout << "  " << classes.size()
              << " labelled classes realize the pattern (N_F)\n\n";

    // Stage 3: the equivariant Euler class of the virtual normal bundle,
    // factor by factor, for one representative labelled class.  Every later
    // stage works on the same labelled graph: the class's variables belong
    // to its parametrizing space.
    const FixedLocusGraph& labelled      = classes.front();
    const auto             factorization = euler_normal(labelled);
    std::cout << "e(normal) =\n";
    for (const auto& f : factorization.numerator)
        std::cout << "    x  " << f.rendered << "\n";
    for (const auto& f : factorization.denominator)
        std::cout << "    /  " << f.rendered << "\n";

    // Stage 4: the hbar^0 coefficient of insertion * hbar^2 / e(normal) is
    // the tautological class this locus feeds into the relation.
    const auto cls = contribution_class(labelled, pattern, 2);
    std::cout << "\nhbar^0 class: " << cls.to_string() << "\n";

    // Stage 5: expand the class into decorated boundary strata, rewrite
    // cotangent and Hodge decorations into deeper strata, and stabilize
    // every term into a stratum of the target space.
    const auto initial = initial_strata(labelled, cls);
    long       reduced = 0, surviving = 0;
    for (const auto& stratum : initial)
        for (const auto& term : reduce(stratum)) {
            ++reduced;
            if (stabilize(term, &labelled))
                ++surviving;
        }
    std::cout << initial.size() << " initial decorated strata, " << reduced
              << " fully rewritten terms, " << surviving
              << " survive the pushforward\n";

    // Stage 6: read the surviving strata off against the basis of
    // dimension-two boundary classes, with the reciprocal automorphism
    // count as prefactor.
    const auto basis  = DeltaBasis::for_target(1, 4);
    const auto record = locus_record(*chosen, pattern, 2, basis);
    std::cout << "\ncontribution of this locus:\n";
    for (size_t i = 0; i < basis.entries.size(); ++i)
        if (record.contribution.coords[i] != 0)
            std::cout << "    "
                      << to_fraction_string(record.contribution.coords[i])
                      << " * " << basis.entries[i].name << "\n";
    return 0;
}
