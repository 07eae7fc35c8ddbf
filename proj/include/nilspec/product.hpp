#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nilspec/spectrum.hpp"
#include "nilspec/twostep.hpp"

namespace nilspec {

// k x k matrix of homomorphisms between the factors of a direct product.
// Block (i, j) maps N_j into N_i and is given by the images of N_j's base
// generators inside N_i; a zero block is the trivial homomorphism.
struct BlockEntry {
    bool zero = true;
    std::vector<GroupElement> images; // one per base generator of N_j
};

struct BlockMap {
    std::vector<TwoStepGroup> factors;
    std::vector<std::vector<BlockEntry>> blocks;
};

TwoStepGroup product_of(const BlockMap& b);

// Checks the commuting-image condition (images of blocks (i,k) and (i,l)
// commute for k != l; sufficient on generators in 2-step groups) and that
// each block is a homomorphism, then assembles the single endomorphism of
// the product group. Block extraction is the exact inverse.
Endo assemble_block(const BlockMap& b, const TwoStepGroup& product);

BlockMap extract_block_map(const std::vector<TwoStepGroup>& factors,
                           const TwoStepGroup& product, const Endo& f);

// Structure of an automorphism of a product of non-abelian rationally
// indecomposable factors: one isomorphism block per row and column located
// by a permutation sigma, all other blocks central with trivial image on
// centers.
struct StructureReport {
    std::vector<std::size_t> sigma;           // row i -> column sigma[i]
    std::vector<bool> iso_flags;              // block (i, sigma[i]) is an isomorphism
    std::vector<std::vector<bool>> central_flags;     // off-block images central
    std::vector<std::vector<bool>> center_kill_flags; // off-blocks kill centers
    std::vector<std::string> violations;      // theorem-violation certificates

    bool ok() const { return violations.empty(); }
};

// Preconditions (hard, per the theorem's hypotheses): every factor non-abelian
// and rationally indecomposable, and the assembled map an automorphism;
// violations of the preconditions throw DomainError. Structure violations on
// a purported automorphism are returned as certificates, not thrown.
StructureReport analyze_automorphism(const BlockMap& b);

struct OffBlock {
    std::size_t row, col;
    std::vector<GroupElement> images; // must land in Z(N_row)
};

// Converse construction: diagonal_isos[i] is an isomorphism N_sigma(i) -> N_i
// and every off-block has central images; the result is an automorphism.
BlockMap build_structured(const std::vector<TwoStepGroup>& factors,
                          const std::vector<std::size_t>& sigma,
                          const std::vector<Endo>& diagonal_isos,
                          const std::vector<OffBlock>& off_blocks);

// Keeps exactly the blocks (i, sigma(i)); drops the central off-blocks.
// The Reidemeister number is unchanged.
BlockMap diagonalize(const BlockMap& b);

// R computed three independent ways (assembled product group, diagonalized
// map, per-cycle composites of sigma) with exact agreement enforced.
ExtNat reidemeister_block(const BlockMap& b);

// SpecR of a product N_1^(r_1) x ... x N_k^(r_k) x Z^rank from the factor
// spectra: prod_i union_{j<=r_i} S_i^(j), times SpecR(Z^rank) when rank > 0.
// Factors must be pairwise non-isomorphic; this is the caller's
// responsibility and is not verified.
SpectrumExpr spectrum_compose(
    const std::vector<std::pair<SpectrumExpr, unsigned>>& factor_spectra,
    unsigned abelian_rank);

// R-values of sampled automorphisms: a finite subset of SpecR(G).
SpectrumExpr spectrum_sample(const TwoStepGroup& g, unsigned trials,
                             std::uint64_t seed, unsigned word_length = 8,
                             long coeff_bound = 5);

} // namespace nilspec
