#include "nilspec/product.hpp"

#include <algorithm>

#include "nilspec/rng.hpp"

namespace nilspec {

namespace {

void check_shape(const BlockMap& b) {
    const std::size_t k = b.factors.size();
    if (k == 0) throw DomainError("block map: empty factor list");
    if (b.blocks.size() != k)
        throw DomainError("block map: expected " + std::to_string(k) + " block rows");
    for (std::size_t i = 0; i < k; ++i) {
        if (b.blocks[i].size() != k)
            throw DomainError("block map: row " + std::to_string(i) + " has wrong length");
        for (std::size_t j = 0; j < k; ++j) {
            const BlockEntry& e = b.blocks[i][j];
            if (e.zero) continue;
            if (e.images.size() != b.factors[j].base_rank())
                throw DomainError("block (" + std::to_string(i) + "," + std::to_string(j) +
                                  "): wrong number of generator images");
            for (const GroupElement& img : e.images)
                if (img.x.size() != b.factors[i].base_rank() ||
                    img.y.size() != b.factors[i].central_rank())
                    throw DomainError("block (" + std::to_string(i) + "," +
                                      std::to_string(j) + "): image dimension mismatch");
        }
    }
}

GroupElement embed_into_product(const TwoStepGroup& product,
                                const TwoStepGroup::FactorSpan& span,
                                const GroupElement& e) {
    GroupElement out = product.identity();
    for (std::size_t r = 0; r < span.base_count; ++r) out.x[span.base_offset + r] = e.x[r];
    for (std::size_t r = 0; r < span.central_count; ++r)
        out.y[span.central_offset + r] = e.y[r];
    return out;
}

GroupElement project_from_product(const TwoStepGroup& factor,
                                  const TwoStepGroup::FactorSpan& span,
                                  const GroupElement& e) {
    GroupElement out = factor.identity();
    for (std::size_t r = 0; r < span.base_count; ++r) out.x[r] = e.x[span.base_offset + r];
    for (std::size_t r = 0; r < span.central_count; ++r)
        out.y[r] = e.y[span.central_offset + r];
    return out;
}

} // namespace

TwoStepGroup product_of(const BlockMap& b) {
    return direct_product_group(b.factors);
}

Endo assemble_block(const BlockMap& b, const TwoStepGroup& product) {
    check_shape(b);
    const std::size_t k = b.factors.size();

    // commuting-image condition on generators; bilinearity extends it
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t c1 = 0; c1 < k; ++c1)
            for (std::size_t c2 = c1 + 1; c2 < k; ++c2) {
                const BlockEntry& e1 = b.blocks[i][c1];
                const BlockEntry& e2 = b.blocks[i][c2];
                if (e1.zero || e2.zero) continue;
                for (const GroupElement& g1 : e1.images)
                    for (const GroupElement& g2 : e2.images)
                        if (!(b.factors[i].commutator(g1, g2) == b.factors[i].identity()))
                            throw DomainError(
                                "block map: images of blocks (" + std::to_string(i) + "," +
                                std::to_string(c1) + ") and (" + std::to_string(i) + "," +
                                std::to_string(c2) + ") do not commute");
            }

    // each non-zero block must itself be a homomorphism N_j -> N_i
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (!b.blocks[i][j].zero)
                make_morphism(b.factors[i], b.factors[j], b.blocks[i][j].images);

    const auto& spans = product.factors();
    if (spans.size() != k)
        throw DomainError("block map: product group factor spans do not match");
    std::vector<GroupElement> images;
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t v = 0; v < b.factors[j].base_rank(); ++v) {
            GroupElement img = product.identity();
            for (std::size_t i = 0; i < k; ++i) {
                const BlockEntry& e = b.blocks[i][j];
                if (e.zero) continue;
                img = product.multiply(img,
                                       embed_into_product(product, spans[i], e.images[v]));
            }
            images.push_back(std::move(img));
        }
    return make_endomorphism(product, std::move(images));
}

BlockMap extract_block_map(const std::vector<TwoStepGroup>& factors,
                           const TwoStepGroup& product, const Endo& f) {
    const auto& spans = product.factors();
    BlockMap out;
    out.factors = factors;
    out.blocks.assign(factors.size(), std::vector<BlockEntry>(factors.size()));
    for (std::size_t j = 0; j < factors.size(); ++j)
        for (std::size_t i = 0; i < factors.size(); ++i) {
            BlockEntry entry;
            entry.zero = true;
            entry.images.clear();
            for (std::size_t v = 0; v < factors[j].base_rank(); ++v) {
                GroupElement img = f.images[spans[j].base_offset + v];
                GroupElement piece = project_from_product(factors[i], spans[i], img);
                if (!(piece == factors[i].identity())) entry.zero = false;
                entry.images.push_back(std::move(piece));
            }
            if (entry.zero) entry.images.clear();
            out.blocks[i][j] = std::move(entry);
        }
    return out;
}

StructureReport analyze_automorphism(const BlockMap& b) {
    check_shape(b);
    const std::size_t k = b.factors.size();
    for (std::size_t i = 0; i < k; ++i) {
        const TwoStepGroup& f = b.factors[i];
        if (f.central_rank() == 0)
            throw DomainError("analyze_automorphism: factor " + std::to_string(i) +
                              " is abelian; the theorem's hypotheses exclude it");
        if (!f.provenance())
            throw DomainError("analyze_automorphism: factor " + std::to_string(i) +
                              " has no graph provenance");
        if (!is_rationally_indecomposable(*f.provenance()))
            throw DomainError("analyze_automorphism: factor " + std::to_string(i) +
                              " is not rationally indecomposable (graph splits as a join)");
    }

    TwoStepGroup product = product_of(b);
    Endo assembled = assemble_block(b, product);
    if (!is_automorphism(product, assembled))
        throw DomainError("analyze_automorphism: assembled map is not an automorphism");

    StructureReport report;
    report.sigma.assign(k, k);
    report.iso_flags.assign(k, false);
    report.central_flags.assign(k, std::vector<bool>(k, true));
    report.center_kill_flags.assign(k, std::vector<bool>(k, true));

    for (std::size_t i = 0; i < k; ++i) {
        std::vector<std::size_t> isos;
        for (std::size_t j = 0; j < k; ++j) {
            const BlockEntry& e = b.blocks[i][j];
            if (e.zero) continue;
            if (b.factors[i].hirsch_length() != b.factors[j].hirsch_length()) continue;
            Endo block = make_morphism(b.factors[i], b.factors[j], e.images);
            if (is_isomorphism_between(b.factors[i], b.factors[j], block)) isos.push_back(j);
        }
        if (isos.size() != 1) {
            report.violations.push_back("row " + std::to_string(i) + " has " +
                                        std::to_string(isos.size()) +
                                        " isomorphism blocks, expected exactly 1");
            continue;
        }
        report.sigma[i] = isos[0];
        report.iso_flags[i] = true;
    }

    // sigma must be a bijection
    std::vector<bool> hit(k, false);
    for (std::size_t i = 0; i < k; ++i) {
        if (report.sigma[i] == k) continue;
        if (hit[report.sigma[i]])
            report.violations.push_back("column " + std::to_string(report.sigma[i]) +
                                        " carries two isomorphism blocks");
        hit[report.sigma[i]] = true;
    }
    for (std::size_t j = 0; j < k; ++j)
        if (!hit[j] && report.violations.empty())
            report.violations.push_back("column " + std::to_string(j) +
                                        " carries no isomorphism block");

    // off-blocks: central images, and centers mapped to 1
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            if (j == report.sigma[i]) continue;
            const BlockEntry& e = b.blocks[i][j];
            if (e.zero) continue;
            for (const GroupElement& img : e.images)
                if (!b.factors[i].is_central(img)) {
                    report.central_flags[i][j] = false;
                    report.violations.push_back("block (" + std::to_string(i) + "," +
                                                std::to_string(j) +
                                                ") has a non-central image");
                    break;
                }
            Endo block = make_morphism(b.factors[i], b.factors[j], e.images);
            const TwoStepGroup& dom = b.factors[j];
            bool kills = true;
            for (const IntVec& dir : dom.center_base_directions()) {
                GroupElement z = dom.make_element(dir, IntVec(dom.central_rank()));
                if (!(apply_morphism(b.factors[i], dom, block, z) == b.factors[i].identity()))
                    kills = false;
            }
            if (!block.C.is_zero()) kills = false;
            if (!kills) {
                report.center_kill_flags[i][j] = false;
                report.violations.push_back("block (" + std::to_string(i) + "," +
                                            std::to_string(j) +
                                            ") does not kill the factor's center");
            }
        }
    return report;
}

BlockMap build_structured(const std::vector<TwoStepGroup>& factors,
                          const std::vector<std::size_t>& sigma,
                          const std::vector<Endo>& diagonal_isos,
                          const std::vector<OffBlock>& off_blocks) {
    const std::size_t k = factors.size();
    if (sigma.size() != k || diagonal_isos.size() != k)
        throw DomainError("build_structured: sigma and diagonal_isos must match factors");
    {
        std::vector<bool> hit(k, false);
        for (std::size_t s : sigma) {
            if (s >= k || hit[s]) throw DomainError("build_structured: sigma is not a permutation");
            hit[s] = true;
        }
    }
    BlockMap b;
    b.factors = factors;
    b.blocks.assign(k, std::vector<BlockEntry>(k));
    for (std::size_t i = 0; i < k; ++i) {
        const Endo iso = make_morphism(factors[i], factors[sigma[i]], diagonal_isos[i].images);
        if (!is_isomorphism_between(factors[i], factors[sigma[i]], iso))
            throw DomainError("build_structured: diagonal block " + std::to_string(i) +
                              " is not an isomorphism");
        b.blocks[i][sigma[i]] = BlockEntry{false, iso.images};
    }
    for (const OffBlock& ob : off_blocks) {
        if (ob.row >= k || ob.col >= k || ob.col == sigma[ob.row])
            throw DomainError("build_structured: off-block position invalid");
        for (const GroupElement& img : ob.images)
            if (!factors[ob.row].is_central(img))
                throw DomainError("build_structured: off-block (" + std::to_string(ob.row) +
                                  "," + std::to_string(ob.col) +
                                  ") has a non-central image");
        b.blocks[ob.row][ob.col] = BlockEntry{false, ob.images};
    }
    return b;
}

BlockMap diagonalize(const BlockMap& b) {
    StructureReport report = analyze_automorphism(b);
    if (!report.ok())
        throw DomainError("diagonalize: input violates the structure theorem: " +
                          report.violations.front());
    BlockMap out;
    out.factors = b.factors;
    out.blocks.assign(b.factors.size(), std::vector<BlockEntry>(b.factors.size()));
    for (std::size_t i = 0; i < b.factors.size(); ++i)
        out.blocks[i][report.sigma[i]] = b.blocks[i][report.sigma[i]];
    return out;
}

ExtNat reidemeister_block(const BlockMap& b) {
    StructureReport report = analyze_automorphism(b);
    if (!report.ok())
        throw DomainError("reidemeister_block: input violates the structure theorem: " +
                          report.violations.front());
    TwoStepGroup product = product_of(b);

    ExtNat direct = reidemeister(product, assemble_block(b, product));

    BlockMap diag = diagonalize(b);
    ExtNat diagonal = reidemeister(product, assemble_block(diag, product));

    // per-cycle composites of sigma; the base point of each cycle is
    // irrelevant because R is a conjugation invariant of Aut
    ExtNat cycles = ExtNat::finite(1);
    std::vector<bool> seen(b.factors.size(), false);
    for (std::size_t start = 0; start < b.factors.size(); ++start) {
        if (seen[start]) continue;
        Endo composite = make_morphism(b.factors[start], b.factors[report.sigma[start]],
                                       b.blocks[start][report.sigma[start]].images);
        seen[start] = true;
        std::size_t j = report.sigma[start];
        while (j != start) {
            seen[j] = true;
            Endo next = make_morphism(b.factors[j], b.factors[report.sigma[j]],
                                      b.blocks[j][report.sigma[j]].images);
            composite = compose_morphism(b.factors[start], b.factors[j],
                                         b.factors[report.sigma[j]], composite, next);
            j = report.sigma[j];
        }
        cycles = ext_mul(cycles, reidemeister(b.factors[start], composite));
    }

    if (!(direct == diagonal) || !(direct == cycles))
        throw InternalError("reidemeister_block: three-way disagreement (direct " +
                            direct.str() + ", diagonalized " + diagonal.str() +
                            ", cycles " + cycles.str() + ")");
    return direct;
}

SpectrumExpr spectrum_compose(
    const std::vector<std::pair<SpectrumExpr, unsigned>>& factor_spectra,
    unsigned abelian_rank) {
    std::vector<SpectrumExpr> parts;
    for (const auto& [spec, mult] : factor_spectra) {
        if (mult == 0) throw DomainError("spectrum_compose: multiplicity must be >= 1");
        parts.push_back(spec_union_fold(spec, mult));
    }
    if (abelian_rank > 0) parts.push_back(abelian_spectrum(abelian_rank));
    if (parts.empty()) throw DomainError("spectrum_compose: nothing to compose");
    return spec_product(std::move(parts));
}

SpectrumExpr spectrum_sample(const TwoStepGroup& g, unsigned trials,
                             std::uint64_t seed, unsigned word_length,
                             long coeff_bound) {
    if (trials == 0) throw DomainError("spectrum_sample: no data (zero trials)");
    std::set<ExtNat> values;
    for (unsigned t = 0; t < trials; ++t) {
        Endo f = sample_automorphism(g, mix_seed(seed, t), word_length, coeff_bound);
        values.insert(reidemeister(g, f));
    }
    return SpectrumExpr::finite(std::move(values));
}

} // namespace nilspec
