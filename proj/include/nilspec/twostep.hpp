#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nilspec/extnat.hpp"
#include "nilspec/graph.hpp"
#include "nilspec/intmatrix.hpp"

namespace nilspec {

// Normal form a_1^{x_1} ... a_n^{x_n} c_1^{y_1} ... c_m^{y_m}; one element,
// one coordinate vector pair.
struct GroupElement {
    IntVec x; // base exponents
    IntVec y; // central exponents
    bool operator==(const GroupElement& o) const = default;
};

// Finitely generated torsion-free 2-step nilpotent group in Malcev
// coordinates: n base generators a_i, m central generators c_k, and for each
// pair j > i a vector lambda(j,i) with [a_j, a_i] = prod_k c_k^{lambda_k(j,i)}.
//
// Commutator convention, used everywhere including the Lie bracket:
//   [g, h] = g^-1 h^-1 g h,  and for a graph group the non-edge {v_i, v_j},
//   i < j, contributes [a_j, a_i] = c_k with coefficient +1.
//
// Groups are immutable after construction and safe to share across threads.
class TwoStepGroup {
public:
    struct FactorSpan {
        std::size_t base_offset, base_count, central_offset, central_count;
    };

    std::size_t base_rank() const { return n_; }
    std::size_t central_rank() const { return m_; }
    std::size_t hirsch_length() const { return n_ + m_; }

    // lambda(j, i) for j > i, length m
    const IntVec& pairing(std::size_t j, std::size_t i) const;

    // graph-type pairing: every lambda(j,i) is zero or a standard basis
    // vector, and every central generator is hit exactly once. Groups built
    // from graphs (and their products) always have this shape.
    bool is_graph_type() const { return graph_type_; }
    // k -> (i, j) with i < j and c_k = [a_j, a_i]
    const std::vector<std::pair<std::size_t, std::size_t>>& central_pairs() const;
    // pairs (i, j), i < j, with trivial commutator (the presentation's edges)
    std::vector<std::pair<std::size_t, std::size_t>> presentation_edges() const;

    const std::optional<Graph>& provenance() const { return provenance_; }
    const std::vector<FactorSpan>& factors() const { return factors_; }

    // --- element arithmetic ---
    GroupElement identity() const;
    GroupElement generator(std::size_t i) const;
    GroupElement central_generator(std::size_t k) const;
    GroupElement make_element(IntVec x, IntVec y) const;

    GroupElement multiply(const GroupElement& g, const GroupElement& h) const;
    GroupElement inverse(const GroupElement& g) const;
    GroupElement power(const GroupElement& g, const Int& k) const;
    // always central: zero base part
    GroupElement commutator(const GroupElement& g, const GroupElement& h) const;

    // collection term q(x, x') with q_k = sum_{j>i} lambda_k(j,i) x_j x'_i
    IntVec collection_term(const IntVec& x, const IntVec& x2) const;
    // central part of the commutator of elements with these base parts:
    // q(x, x') - q(x', x); bilinear and antisymmetric
    IntVec commutator_form(const IntVec& x, const IntVec& x2) const;

    bool is_central(const GroupElement& g) const;

    // --- subgroup structure ---
    // saturated basis K of the base directions of Z(N); the center is
    // {(x, y) : x in span K, y arbitrary}
    const std::vector<IntVec>& center_base_directions() const;
    // basis of the lattice in Z^m spanned by all lambda(j,i)
    std::vector<IntVec> gamma2_basis() const;
    // saturation of gamma2 inside Z^m (the base part of the isolator is zero)
    std::vector<IntVec> isolator_gamma2_basis() const;

    friend TwoStepGroup build_graph_group(const Graph& gamma);
    friend TwoStepGroup direct_product_group(const std::vector<TwoStepGroup>& gs);

private:
    TwoStepGroup() = default;
    std::size_t pair_index(std::size_t j, std::size_t i) const; // j > i
    void finish_construction();

    std::size_t n_ = 0, m_ = 0;
    std::vector<IntVec> pairing_; // triangular, index pair_index(j,i)
    bool graph_type_ = false;
    std::vector<std::pair<std::size_t, std::size_t>> central_pairs_;
    std::optional<Graph> provenance_;
    std::vector<FactorSpan> factors_;
    std::vector<IntVec> center_base_; // computed once at construction
};

// N_Gamma = A_Gamma / gamma_3: n = |V|, one central generator per non-edge
TwoStepGroup build_graph_group(const Graph& gamma);

// Block-diagonal pairing; factor boundaries are recorded and the provenance
// is the simplicial join of the factor graphs (labels prefixed per factor).
TwoStepGroup direct_product_group(const std::vector<TwoStepGroup>& gs);

// Endomorphism (or a homomorphism between two groups) given by the images of
// the domain's base generators. A is the abelianized matrix with column i the
// base part of the image of a_i; C is the induced central matrix, determined
// by A through bilinearity of the commutator. Both are fixed at validation.
struct Endo {
    std::vector<GroupElement> images;
    IntMatrix A, C;
    bool operator==(const Endo& o) const { return images == o.images; }
};

// Validates the edge relations of the domain presentation ([img_v, img_w] = 1
// whenever lambda(w,v) = 0) and computes A and C. Throws DomainError naming
// the violated pair otherwise.
Endo make_morphism(const TwoStepGroup& cod, const TwoStepGroup& dom,
                   std::vector<GroupElement> images);
Endo make_endomorphism(const TwoStepGroup& g, std::vector<GroupElement> images);
Endo identity_endo(const TwoStepGroup& g);

GroupElement apply_morphism(const TwoStepGroup& cod, const TwoStepGroup& dom,
                            const Endo& f, const GroupElement& g);
GroupElement apply(const TwoStepGroup& g, const Endo& f, const GroupElement& e);

// compose(f, g)(x) = f(g(x))
Endo compose_morphism(const TwoStepGroup& cod, const TwoStepGroup& mid,
                      const TwoStepGroup& dom, const Endo& f, const Endo& g);
Endo compose(const TwoStepGroup& g, const Endo& f, const Endo& h);

// Wehrfritz criterion: an endomorphism restricting to an automorphism of the
// center is an automorphism. Checks explicitly that the center is preserved.
bool is_automorphism(const TwoStepGroup& g, const Endo& f);

// f must be an isomorphism dom -> cod (equal ranks, |det A| = |det C| = 1)
bool is_isomorphism_between(const TwoStepGroup& cod, const TwoStepGroup& dom,
                            const Endo& f);

Endo invert_automorphism(const TwoStepGroup& g, const Endo& f);

// R(phi) = R(phi_Z) R(phi-bar) along 1 <= Z(N) <= N, each factor an abelian
// cokernel order. Requires an automorphism.
ExtNat reidemeister(const TwoStepGroup& g, const Endo& f);

enum class Series { Center, Gamma2Isolator };

// Same product formula along the chosen two-term series; both series are
// characteristic, and the results must agree with reidemeister().
ExtNat reidemeister_via_series(const TwoStepGroup& g, const Endo& f, Series series);

struct TwistedDecision {
    bool conjugate;
    GroupElement witness; // z with x = z y phi(z)^-1, verified by multiplication
};

// Exact decision of phi-conjugacy. The abelianized layer is a lattice solve;
// the central layer is a Diophantine condition over the remaining free
// variables, enumerated over one period when quadratic terms survive.
TwistedDecision twisted_conjugate(const TwoStepGroup& g, const Endo& f,
                                  const GroupElement& x, const GroupElement& y);

// Number of twisted conjugacy classes that meet the coordinate box
// [-radius, radius]^(n+m); witnesses are verified by multiplication.
std::size_t census_classes(const TwoStepGroup& g, const Endo& f, long radius);

// Coordinates reduced mod an odd prime p with the same multiplication law;
// a finite group of order p^(n+m).
class FiniteQuotient {
public:
    FiniteQuotient(const TwoStepGroup& g, long p);

    long modulus() const { return p_; }
    std::size_t order() const;

    // orbit count of x -> z x phi(z)^-1 by union-find over all elements
    std::size_t twisted_class_count(const Endo& f) const;
    // |{z phi(z)^-1 : z}|; for abelian handles this is |im(1 - f)|
    std::size_t translate_image_size(const Endo& f) const;

private:
    GroupElement reduce(const GroupElement& e) const;
    std::size_t index_of(const GroupElement& e) const;
    GroupElement element_at(std::size_t idx) const;

    const TwoStepGroup& g_;
    long p_;
};

// --- rational (Malcev) completion via BCH ---

// log-coordinates in the rational Lie algebra W + U; e^x is identified with x
struct RationalPoint {
    RatVec w, u;
    bool operator==(const RationalPoint& o) const = default;
};

RatVec lie_bracket(const TwoStepGroup& g, const RatVec& a, const RatVec& b);
// e^x e^y = e^{x + y + (1/2)[x,y]}
RationalPoint bch_multiply(const TwoStepGroup& g, const RationalPoint& a,
                           const RationalPoint& b);
RationalPoint bch_inverse(const RationalPoint& a);
RationalPoint bch_power(const RationalPoint& a, const Int& k);
// the unique k-th root e^{x/k}
RationalPoint bch_root(const RationalPoint& a, const Int& k);

// closed-form log of a group element
RationalPoint log_coordinates(const TwoStepGroup& g, const GroupElement& e);
// the embedding F, computed by folding generator powers through bch_multiply;
// an injective homomorphism, and equal to log_coordinates by construction
RationalPoint embed_F(const TwoStepGroup& g, const GroupElement& e);

// Witt's formula: (1/c) sum_{d | c} mu(d) r^{c/d}, the free-Lie-algebra rank
// in degree c over r generators
Int witt_rank(long r, long c);

// Deterministic word in generator automorphisms: graph-automorphism
// permutations, generator inversions, transvections a_v -> a_v a_w^(+-1)
// when link(v) is contained in star(w), and central twists a_v -> a_v z.
// Requires graph provenance; the result always passes is_automorphism.
Endo sample_automorphism(const TwoStepGroup& g, std::uint64_t seed,
                         unsigned word_length = 8, long coeff_bound = 5);

} // namespace nilspec
