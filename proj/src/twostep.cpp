#include "nilspec/twostep.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "nilspec/rng.hpp"

namespace nilspec {

namespace {

IntVec zero_vec(std::size_t n) { return IntVec(n); }

bool is_zero_vec(const IntVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

IntVec add_vec(const IntVec& a, const IntVec& b) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

IntVec sub_vec(const IntVec& a, const IntVec& b) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

} // namespace

std::size_t TwoStepGroup::pair_index(std::size_t j, std::size_t i) const {
    // triangular index for j > i
    return j * (j - 1) / 2 + i;
}

const IntVec& TwoStepGroup::pairing(std::size_t j, std::size_t i) const {
    if (j <= i || j >= n_) throw DomainError("pairing: need n > j > i");
    return pairing_[pair_index(j, i)];
}

const std::vector<std::pair<std::size_t, std::size_t>>& TwoStepGroup::central_pairs() const {
    if (!graph_type_)
        throw DomainError("central_pairs: group pairing is not graph-type");
    return central_pairs_;
}

std::vector<std::pair<std::size_t, std::size_t>> TwoStepGroup::presentation_edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t j = 1; j < n_; ++j)
        for (std::size_t i = 0; i < j; ++i)
            if (is_zero_vec(pairing_[pair_index(j, i)])) out.emplace_back(i, j);
    return out;
}

GroupElement TwoStepGroup::identity() const {
    return GroupElement{zero_vec(n_), zero_vec(m_)};
}

GroupElement TwoStepGroup::generator(std::size_t i) const {
    GroupElement e = identity();
    e.x[i] = 1;
    return e;
}

GroupElement TwoStepGroup::central_generator(std::size_t k) const {
    GroupElement e = identity();
    e.y[k] = 1;
    return e;
}

GroupElement TwoStepGroup::make_element(IntVec x, IntVec y) const {
    if (x.size() != n_ || y.size() != m_)
        throw DomainError("make_element: coordinate dimension mismatch");
    return GroupElement{std::move(x), std::move(y)};
}

IntVec TwoStepGroup::collection_term(const IntVec& x, const IntVec& x2) const {
    IntVec q(m_);
    for (std::size_t j = 1; j < n_; ++j) {
        if (x[j] == 0) continue;
        for (std::size_t i = 0; i < j; ++i) {
            if (x2[i] == 0) continue;
            const IntVec& lam = pairing_[pair_index(j, i)];
            Int coeff = x[j] * x2[i];
            for (std::size_t k = 0; k < m_; ++k)
                if (lam[k] != 0) q[k] += lam[k] * coeff;
        }
    }
    return q;
}

IntVec TwoStepGroup::commutator_form(const IntVec& x, const IntVec& x2) const {
    return sub_vec(collection_term(x, x2), collection_term(x2, x));
}

GroupElement TwoStepGroup::multiply(const GroupElement& g, const GroupElement& h) const {
    if (g.x.size() != n_ || h.x.size() != n_)
        throw DomainError("multiply: element does not belong to this group");
    // collecting h's base letters past g's contributes q(x, x') centrally
    GroupElement r{add_vec(g.x, h.x), add_vec(add_vec(g.y, h.y), collection_term(g.x, h.x))};
    return r;
}

GroupElement TwoStepGroup::inverse(const GroupElement& g) const {
    IntVec nx(n_), ny(m_);
    for (std::size_t i = 0; i < n_; ++i) nx[i] = -g.x[i];
    IntVec q = collection_term(g.x, g.x);
    for (std::size_t k = 0; k < m_; ++k) ny[k] = -g.y[k] + q[k];
    return GroupElement{std::move(nx), std::move(ny)};
}

GroupElement TwoStepGroup::power(const GroupElement& g, const Int& k) const {
    IntVec x(n_), y(m_);
    Int binom = k * (k - 1) / 2;
    IntVec q = collection_term(g.x, g.x);
    for (std::size_t i = 0; i < n_; ++i) x[i] = k * g.x[i];
    for (std::size_t j = 0; j < m_; ++j) y[j] = k * g.y[j] + binom * q[j];
    return GroupElement{std::move(x), std::move(y)};
}

GroupElement TwoStepGroup::commutator(const GroupElement& g, const GroupElement& h) const {
    return multiply(multiply(inverse(g), inverse(h)), multiply(g, h));
}

bool TwoStepGroup::is_central(const GroupElement& g) const {
    for (std::size_t i = 0; i < n_; ++i) {
        IntVec e(n_);
        e[i] = 1;
        if (!is_zero_vec(commutator_form(g.x, e))) return false;
    }
    return true;
}

const std::vector<IntVec>& TwoStepGroup::center_base_directions() const {
    return center_base_;
}

std::vector<IntVec> TwoStepGroup::gamma2_basis() const {
    std::vector<IntVec> spanning;
    for (const IntVec& lam : pairing_)
        if (!is_zero_vec(lam)) spanning.push_back(lam);
    return lattice_basis(spanning);
}

std::vector<IntVec> TwoStepGroup::isolator_gamma2_basis() const {
    std::vector<IntVec> spanning;
    for (const IntVec& lam : pairing_)
        if (!is_zero_vec(lam)) spanning.push_back(lam);
    return saturation(spanning);
}

void TwoStepGroup::finish_construction() {
    // Z(N) base directions: saturated kernel of the stacked antisymmetrized
    // pairing forms. Central generators are always in the center.
    IntMatrix stacked(m_ * n_, n_);
    for (std::size_t k = 0; k < m_; ++k)
        for (std::size_t j = 1; j < n_; ++j)
            for (std::size_t i = 0; i < j; ++i) {
                const Int& lam = pairing_[pair_index(j, i)][k];
                if (lam == 0) continue;
                stacked.at(k * n_ + j, i) = lam;
                stacked.at(k * n_ + i, j) = -lam;
            }
    center_base_ = kernel_basis(stacked);
}

TwoStepGroup build_graph_group(const Graph& gamma) {
    TwoStepGroup g;
    g.n_ = gamma.size();
    auto nonedges = gamma.non_edges();
    g.m_ = nonedges.size();
    g.pairing_.assign(g.n_ * (g.n_ - 1) / 2, IntVec(g.m_));
    for (std::size_t k = 0; k < nonedges.size(); ++k) {
        auto [i, j] = nonedges[k]; // i < j, and [a_j, a_i] = c_k
        g.pairing_[g.pair_index(j, i)][k] = 1;
        g.central_pairs_.emplace_back(i, j);
    }
    g.graph_type_ = true;
    g.provenance_ = gamma;
    g.factors_ = {TwoStepGroup::FactorSpan{0, g.n_, 0, g.m_}};
    g.finish_construction();
    return g;
}

TwoStepGroup direct_product_group(const std::vector<TwoStepGroup>& gs) {
    if (gs.empty()) throw DomainError("direct_product_group: empty factor list");
    if (gs.size() == 1) return gs[0];

    TwoStepGroup g;
    for (const TwoStepGroup& f : gs) {
        g.factors_.push_back(TwoStepGroup::FactorSpan{g.n_, f.base_rank(), g.m_,
                                                      f.central_rank()});
        g.n_ += f.base_rank();
        g.m_ += f.central_rank();
    }
    g.pairing_.assign(g.n_ * (g.n_ - 1) / 2, IntVec(g.m_));
    g.graph_type_ = true;
    for (std::size_t fi = 0; fi < gs.size(); ++fi) {
        const TwoStepGroup& f = gs[fi];
        const auto& span = g.factors_[fi];
        if (!f.is_graph_type()) g.graph_type_ = false;
        for (std::size_t j = 1; j < f.base_rank(); ++j)
            for (std::size_t i = 0; i < j; ++i) {
                const IntVec& lam = f.pairing(j, i);
                IntVec& dst = g.pairing_[g.pair_index(span.base_offset + j,
                                                      span.base_offset + i)];
                for (std::size_t k = 0; k < f.central_rank(); ++k)
                    dst[span.central_offset + k] = lam[k];
            }
        if (f.is_graph_type())
            for (auto [i, j] : f.central_pairs_)
                g.central_pairs_.emplace_back(span.base_offset + i, span.base_offset + j);
    }
    if (!g.graph_type_) g.central_pairs_.clear();

    // provenance: simplicial join of the factor graphs, labels kept distinct
    bool all_graphs = std::all_of(gs.begin(), gs.end(), [](const TwoStepGroup& f) {
        return f.provenance().has_value();
    });
    if (all_graphs) {
        std::vector<std::string> labels;
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t fi = 0; fi < gs.size(); ++fi) {
            const Graph& gr = *gs[fi].provenance();
            std::size_t off = labels.size();
            for (const std::string& v : gr.vertices())
                labels.push_back(std::to_string(fi) + ":" + v);
            for (auto [i, j] : gr.edges()) edges.emplace_back(off + i, off + j);
            // all cross pairs with earlier factors are edges of the join
            for (std::size_t a = 0; a < off; ++a)
                for (std::size_t b = off; b < labels.size(); ++b)
                    edges.emplace_back(a, b);
        }
        g.provenance_ = Graph(std::move(labels), std::move(edges));
    }
    g.finish_construction();
    return g;
}

// ---------------------------------------------------------------------------
// morphisms

Endo make_morphism(const TwoStepGroup& cod, const TwoStepGroup& dom,
                   std::vector<GroupElement> images) {
    if (images.size() != dom.base_rank())
        throw DomainError("make_morphism: need one image per base generator");
    for (const GroupElement& img : images)
        if (img.x.size() != cod.base_rank() || img.y.size() != cod.central_rank())
            throw DomainError("make_morphism: image dimensions do not match codomain");
    if (!dom.is_graph_type())
        throw DomainError("make_morphism: domain pairing is not graph-type");

    // every trivial-commutator relation of the presentation must be preserved
    for (std::size_t j = 1; j < dom.base_rank(); ++j)
        for (std::size_t i = 0; i < j; ++i) {
            if (!is_zero_vec(dom.pairing(j, i))) continue;
            if (!is_zero_vec(cod.commutator_form(images[j].x, images[i].x))) {
                std::string a = std::to_string(i), b = std::to_string(j);
                if (dom.provenance()) {
                    a = dom.provenance()->vertices()[i];
                    b = dom.provenance()->vertices()[j];
                }
                throw DomainError("make_morphism: images of the edge {" + a + "," + b +
                                  "} do not commute");
            }
        }

    Endo f;
    f.A = IntMatrix(cod.base_rank(), dom.base_rank());
    for (std::size_t i = 0; i < dom.base_rank(); ++i)
        for (std::size_t r = 0; r < cod.base_rank(); ++r)
            f.A.at(r, i) = images[i].x[r];
    // c_k = [a_j, a_i] forces the central action by bilinearity
    f.C = IntMatrix(cod.central_rank(), dom.central_rank());
    const auto& pairs = dom.central_pairs();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        auto [i, j] = pairs[k];
        IntVec col = cod.commutator_form(images[j].x, images[i].x);
        for (std::size_t r = 0; r < cod.central_rank(); ++r) f.C.at(r, k) = col[r];
    }
    f.images = std::move(images);
    return f;
}

Endo make_endomorphism(const TwoStepGroup& g, std::vector<GroupElement> images) {
    return make_morphism(g, g, std::move(images));
}

Endo identity_endo(const TwoStepGroup& g) {
    std::vector<GroupElement> images;
    for (std::size_t i = 0; i < g.base_rank(); ++i) images.push_back(g.generator(i));
    return make_endomorphism(g, std::move(images));
}

GroupElement apply_morphism(const TwoStepGroup& cod, const TwoStepGroup& dom,
                            const Endo& f, const GroupElement& g) {
    if (g.x.size() != dom.base_rank())
        throw DomainError("apply_morphism: element does not belong to the domain");
    GroupElement acc = cod.identity();
    for (std::size_t i = 0; i < dom.base_rank(); ++i)
        if (g.x[i] != 0) acc = cod.multiply(acc, cod.power(f.images[i], g.x[i]));
    IntVec cy = f.C.apply(g.y);
    for (std::size_t k = 0; k < cod.central_rank(); ++k) acc.y[k] += cy[k];
    return acc;
}

GroupElement apply(const TwoStepGroup& g, const Endo& f, const GroupElement& e) {
    return apply_morphism(g, g, f, e);
}

Endo compose_morphism(const TwoStepGroup& cod, const TwoStepGroup& mid,
                      const TwoStepGroup& dom, const Endo& f, const Endo& g) {
    std::vector<GroupElement> images;
    images.reserve(dom.base_rank());
    for (const GroupElement& img : g.images)
        images.push_back(apply_morphism(cod, mid, f, img));
    return make_morphism(cod, dom, std::move(images));
}

Endo compose(const TwoStepGroup& g, const Endo& f, const Endo& h) {
    return compose_morphism(g, g, g, f, h);
}

// ---------------------------------------------------------------------------
// automorphisms and Reidemeister numbers

namespace {

struct CenterAction {
    bool preserved = false;
    IntMatrix on_center;   // matrix of phi on Z(N), block lower-triangular
    IntMatrix on_quotient; // induced matrix on N/Z(N)
};

CenterAction center_action(const TwoStepGroup& g, const Endo& f) {
    const std::size_t n = g.base_rank(), m = g.central_rank();
    const auto& k_basis = g.center_base_directions();
    QuotientChart chart(n, k_basis);
    auto split = chart.split(f.A);
    CenterAction out;
    if (!split.invariant) return out;
    out.preserved = true;
    const std::size_t s = chart.sub_rank();

    // basis of Z(N): z_l = (p_l, 0) for the chart columns, then the c_k.
    // phi(z_l) = z^alpha c^(h_l - w_l) where alpha is the chart action of A
    // and w_l is the central part of the ordered product of the z powers.
    out.on_center = IntMatrix(s + m, s + m);
    for (std::size_t l = 0; l < s; ++l) {
        GroupElement z_l = g.make_element(chart.basis().column(l), zero_vec(m));
        GroupElement img = apply(g, f, z_l);
        GroupElement word = g.identity();
        for (std::size_t l2 = 0; l2 < s; ++l2) {
            const Int& a = split.on_sub.at(l2, l);
            out.on_center.at(l2, l) = a;
            if (a != 0) {
                GroupElement z2 = g.make_element(chart.basis().column(l2), zero_vec(m));
                word = g.multiply(word, g.power(z2, a));
            }
        }
        for (std::size_t k = 0; k < m; ++k)
            out.on_center.at(s + k, l) = img.y[k] - word.y[k];
    }
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t r = 0; r < m; ++r)
            out.on_center.at(s + r, s + k) = f.C.at(r, k);

    out.on_quotient = split.on_quotient;
    return out;
}

} // namespace

bool is_automorphism(const TwoStepGroup& g, const Endo& f) {
    CenterAction ca = center_action(g, f);
    if (!ca.preserved) return false;
    Int d = det(ca.on_center);
    return d == 1 || d == -1;
}

bool is_isomorphism_between(const TwoStepGroup& cod, const TwoStepGroup& dom,
                            const Endo& f) {
    if (cod.base_rank() != dom.base_rank() || cod.central_rank() != dom.central_rank())
        return false;
    Int da = det(f.A);
    if (da != 1 && da != -1) return false;
    Int dc = det(f.C);
    return dc == 1 || dc == -1;
}

Endo invert_automorphism(const TwoStepGroup& g, const Endo& f) {
    if (!is_automorphism(g, f))
        throw DomainError("invert_automorphism: not an automorphism");
    IntMatrix a_inv = integer_inverse(f.A);
    IntMatrix c_inv = integer_inverse(f.C);
    std::vector<GroupElement> images;
    for (std::size_t i = 0; i < g.base_rank(); ++i) {
        IntVec base = a_inv.column(i);
        GroupElement probe = apply(g, f, g.make_element(base, zero_vec(g.central_rank())));
        IntVec neg(probe.y.size());
        for (std::size_t k = 0; k < neg.size(); ++k) neg[k] = -probe.y[k];
        images.push_back(g.make_element(std::move(base), c_inv.apply(neg)));
    }
    Endo inv = make_endomorphism(g, std::move(images));
    if (!(compose(g, f, inv) == identity_endo(g)) ||
        !(compose(g, inv, f) == identity_endo(g)))
        throw InternalError("invert_automorphism: round-trip is not the identity");
    return inv;
}

ExtNat reidemeister(const TwoStepGroup& g, const Endo& f) {
    CenterAction ca = center_action(g, f);
    if (!ca.preserved)
        throw DomainError("reidemeister: endomorphism does not preserve the center");
    Int d = det(ca.on_center);
    if (d != 1 && d != -1)
        throw DomainError("reidemeister: not an automorphism "
                          "(Reidemeister numbers of endomorphisms are out of scope)");
    return ext_mul(cokernel_order(one_minus(ca.on_center)),
                   cokernel_order(one_minus(ca.on_quotient)));
}

ExtNat reidemeister_via_series(const TwoStepGroup& g, const Endo& f, Series series) {
    if (!is_automorphism(g, f))
        throw DomainError("reidemeister_via_series: not an automorphism");
    if (series == Series::Center) return reidemeister(g, f);

    // series 1 <= sqrt(gamma_2) <= N; the subgroup is {(0, y) : y in L}
    const std::size_t n = g.base_rank(), m = g.central_rank();
    auto l_basis = g.isolator_gamma2_basis();
    QuotientChart chart(m, l_basis);
    auto split = chart.split(f.C);
    if (!split.invariant)
        throw InternalError("reidemeister_via_series: automorphism does not preserve "
                            "the gamma2 isolator");
    const std::size_t qr = chart.quotient_rank();
    // quotient N / sqrt(gamma_2) is free abelian of rank n + qr
    IntMatrix mq(n + qr, n + qr);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < n; ++r) mq.at(r, i) = f.A.at(r, i);
        IntVec tail = chart.project(f.images[i].y);
        for (std::size_t r = 0; r < qr; ++r) mq.at(n + r, i) = tail[r];
    }
    for (std::size_t k = 0; k < qr; ++k)
        for (std::size_t r = 0; r < qr; ++r)
            mq.at(n + r, n + k) = split.on_quotient.at(r, k);

    return ext_mul(cokernel_order(one_minus(split.on_sub)),
                   cokernel_order(one_minus(mq)));
}

// ---------------------------------------------------------------------------
// twisted conjugacy

namespace {

constexpr std::size_t kEnumerationCap = 2'000'000;

// odometer over [0, period)^dim with a callback; returns true on early success
template <typename F>
bool enumerate_box(std::size_t dim, const Int& period, F&& visit) {
    IntVec t(dim);
    for (;;) {
        if (visit(t)) return true;
        std::size_t i = 0;
        while (i < dim) {
            if (++t[i] < period) break;
            t[i] = 0;
            ++i;
        }
        if (i == dim) return false;
    }
}

} // namespace

TwistedDecision twisted_conjugate(const TwoStepGroup& g, const Endo& f,
                                  const GroupElement& x, const GroupElement& y) {
    if (!is_automorphism(g, f))
        throw DomainError("twisted_conjugate: not an automorphism");
    const std::size_t m = g.central_rank();

    // abelianized layer: (I - A) u = x.x - y.x
    IntMatrix ia = one_minus(f.A);
    auto u0 = solve(ia, sub_vec(x.x, y.x));
    TwistedDecision no{false, g.identity()};
    if (!u0) return no;
    auto free_dirs = kernel_basis(ia);
    const std::size_t d = free_dirs.size();

    auto u_at = [&](const IntVec& t) {
        IntVec u = *u0;
        for (std::size_t i = 0; i < d; ++i)
            if (t[i] != 0)
                for (std::size_t r = 0; r < u.size(); ++r)
                    u[r] += t[i] * free_dirs[i][r];
        return u;
    };
    // central gap w(t) = x.y - (z_u y phi(z_u)^-1).y with z_u = (u(t), 0)
    auto eval_w = [&](const IntVec& t) {
        GroupElement zu = g.make_element(u_at(t), zero_vec(m));
        GroupElement e = g.multiply(g.multiply(zu, y), g.inverse(apply(g, f, zu)));
        return sub_vec(x.y, e.y);
    };

    IntMatrix ic = one_minus(f.C);
    auto finish = [&](const IntVec& t) -> std::optional<GroupElement> {
        auto v = solve(ic, eval_w(t));
        if (!v) return std::nullopt;
        GroupElement z = g.make_element(u_at(t), *v);
        GroupElement check = g.multiply(g.multiply(z, y), g.inverse(apply(g, f, z)));
        if (!(check == x))
            throw InternalError("twisted_conjugate: witness failed verification");
        return z;
    };

    if (d == 0) {
        auto z = finish(IntVec{});
        return z ? TwistedDecision{true, *z} : no;
    }
    if (m == 0) {
        // no central layer: the abelianized solve was the whole condition
        auto z = finish(zero_vec(d));
        return z ? TwistedDecision{true, *z} : no;
    }

    SnfResult sc = smith_normal_form(ic);
    IntVec diag = snf_diagonal(sc);
    const std::size_t rank =
        static_cast<std::size_t>(std::count_if(diag.begin(), diag.end(),
                                               [](const Int& v) { return v != 0; }));

    if (rank == m) {
        // finite-index image lattice: one doubled-exponent period decides
        Int period = 2 * diag[m - 1];
        Int total = 1;
        for (std::size_t i = 0; i < d; ++i) {
            total *= period;
            if (total > kEnumerationCap)
                throw DomainError("twisted_conjugate: enumeration bound exceeded");
        }
        std::optional<GroupElement> witness;
        enumerate_box(d, period, [&](const IntVec& t) {
            witness = finish(t);
            return witness.has_value();
        });
        return witness ? TwistedDecision{true, *witness} : no;
    }

    // rank-deficient central layer: the component of w transverse to the
    // saturation S of im(I - C) must vanish. That component has to be affine
    // in t for an exact decision; quadratic survivors are out of scope.
    auto s_basis = saturation([&] {
        std::vector<IntVec> cols;
        for (std::size_t j = 0; j < m; ++j) cols.push_back(ic.column(j));
        return cols;
    }());
    QuotientChart s_chart(m, s_basis);

    IntVec w0 = eval_w(zero_vec(d));
    std::vector<IntVec> wi(d);
    for (std::size_t i = 0; i < d; ++i) {
        IntVec t = zero_vec(d);
        t[i] = 1;
        wi[i] = eval_w(t);
    }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            IntVec t = zero_vec(d);
            t[i] += 1;
            t[j] += 1;
            IntVec q = eval_w(t); // w(e_i + e_j), or w(2 e_i) on the diagonal
            IntVec hess = add_vec(sub_vec(sub_vec(q, wi[i]), wi[j]), w0);
            if (!is_zero_vec(s_chart.project(hess)))
                throw DomainError("twisted_conjugate: quadratic transverse obstruction "
                                  "is outside the supported decision procedure");
        }

    // affine transverse system pi(w0) + sum t_i pi(wi - w0) = 0
    const std::size_t tr = s_chart.quotient_rank();
    IntMatrix lin(tr, d);
    for (std::size_t i = 0; i < d; ++i) {
        IntVec col = s_chart.project(sub_vec(wi[i], w0));
        for (std::size_t r = 0; r < tr; ++r) lin.at(r, i) = col[r];
    }
    IntVec rhs(tr);
    {
        IntVec p0 = s_chart.project(w0);
        for (std::size_t r = 0; r < tr; ++r) rhs[r] = -p0[r];
    }
    auto t1 = solve(lin, rhs);
    if (!t1) return no;
    auto t_free = kernel_basis(lin);

    if (rank == 0) {
        // im(I - C) = 0: the affine solve is the whole condition
        auto z = finish(*t1);
        return z ? TwistedDecision{true, *z} : no;
    }

    Int period = 2 * diag[rank - 1];
    Int total = 1;
    for (std::size_t i = 0; i < t_free.size(); ++i) {
        total *= period;
        if (total > kEnumerationCap)
            throw DomainError("twisted_conjugate: enumeration bound exceeded");
    }
    std::optional<GroupElement> witness;
    enumerate_box(t_free.size(), period, [&](const IntVec& s) {
        IntVec t = *t1;
        for (std::size_t i = 0; i < t_free.size(); ++i)
            if (s[i] != 0)
                for (std::size_t r = 0; r < d; ++r) t[r] += s[i] * t_free[i][r];
        witness = finish(t);
        return witness.has_value();
    });
    return witness ? TwistedDecision{true, *witness} : no;
}

std::size_t census_classes(const TwoStepGroup& g, const Endo& f, long radius) {
    if (radius < 0) throw DomainError("census_classes: radius must be >= 0");
    const std::size_t dims = g.hirsch_length();
    const Int width = 2 * radius + 1;
    std::vector<GroupElement> reps;
    enumerate_box(dims, width, [&](const IntVec& t) {
        IntVec x(g.base_rank()), y(g.central_rank());
        for (std::size_t i = 0; i < g.base_rank(); ++i) x[i] = t[i] - radius;
        for (std::size_t k = 0; k < g.central_rank(); ++k)
            y[k] = t[g.base_rank() + k] - radius;
        GroupElement e = g.make_element(std::move(x), std::move(y));
        for (const GroupElement& rep : reps)
            if (twisted_conjugate(g, f, e, rep).conjugate) return false;
        reps.push_back(std::move(e));
        return false; // keep going; we want the full census
    });
    return reps.size();
}

// ---------------------------------------------------------------------------
// finite quotients

FiniteQuotient::FiniteQuotient(const TwoStepGroup& g, long p) : g_(g), p_(p) {
    if (p < 3) throw DomainError("reduce_mod_p: modulus must be an odd prime >= 3");
    if (p % 2 == 0) throw DomainError("reduce_mod_p: modulus must be odd");
    for (long q = 3; q * q <= p; q += 2)
        if (p % q == 0) throw DomainError("reduce_mod_p: modulus must be prime");
    double cells = 1;
    for (std::size_t i = 0; i < g.hirsch_length(); ++i) cells *= double(p);
    if (cells > 50'000'000.0)
        throw DomainError("reduce_mod_p: quotient too large to enumerate");
}

std::size_t FiniteQuotient::order() const {
    std::size_t o = 1;
    for (std::size_t i = 0; i < g_.hirsch_length(); ++i) o *= std::size_t(p_);
    return o;
}

GroupElement FiniteQuotient::reduce(const GroupElement& e) const {
    GroupElement r = e;
    for (Int& v : r.x) {
        v %= p_;
        if (v < 0) v += p_;
    }
    for (Int& v : r.y) {
        v %= p_;
        if (v < 0) v += p_;
    }
    return r;
}

std::size_t FiniteQuotient::index_of(const GroupElement& e) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < g_.base_rank(); ++i)
        idx = idx * std::size_t(p_) + e.x[i].convert_to<std::size_t>();
    for (std::size_t k = 0; k < g_.central_rank(); ++k)
        idx = idx * std::size_t(p_) + e.y[k].convert_to<std::size_t>();
    return idx;
}

GroupElement FiniteQuotient::element_at(std::size_t idx) const {
    IntVec x(g_.base_rank()), y(g_.central_rank());
    for (std::size_t k = g_.central_rank(); k-- > 0;) {
        y[k] = long(idx % std::size_t(p_));
        idx /= std::size_t(p_);
    }
    for (std::size_t i = g_.base_rank(); i-- > 0;) {
        x[i] = long(idx % std::size_t(p_));
        idx /= std::size_t(p_);
    }
    return GroupElement{std::move(x), std::move(y)};
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

} // namespace

std::size_t FiniteQuotient::twisted_class_count(const Endo& f) const {
    const std::size_t total = order();
    UnionFind uf(total);

    // generator moves x -> z x phi(z)^-1 generate the whole twisting action
    std::vector<GroupElement> gens, phi_inv;
    for (std::size_t i = 0; i < g_.base_rank(); ++i) gens.push_back(g_.generator(i));
    for (std::size_t k = 0; k < g_.central_rank(); ++k)
        gens.push_back(g_.central_generator(k));
    for (const GroupElement& z : gens)
        phi_inv.push_back(g_.inverse(apply(g_, f, z)));

    for (std::size_t idx = 0; idx < total; ++idx) {
        GroupElement e = element_at(idx);
        for (std::size_t gi = 0; gi < gens.size(); ++gi) {
            GroupElement moved =
                reduce(g_.multiply(g_.multiply(gens[gi], e), phi_inv[gi]));
            uf.unite(idx, index_of(moved));
        }
    }
    std::size_t classes = 0;
    for (std::size_t idx = 0; idx < total; ++idx)
        if (uf.find(idx) == idx) ++classes;
    return classes;
}

std::size_t FiniteQuotient::translate_image_size(const Endo& f) const {
    const std::size_t total = order();
    std::vector<bool> seen(total, false);
    std::size_t count = 0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        GroupElement z = element_at(idx);
        GroupElement t = reduce(g_.multiply(z, g_.inverse(apply(g_, f, z))));
        std::size_t ti = index_of(t);
        if (!seen[ti]) {
            seen[ti] = true;
            ++count;
        }
    }
    return count;
}

// ---------------------------------------------------------------------------
// rational completion via BCH

RatVec lie_bracket(const TwoStepGroup& g, const RatVec& a, const RatVec& b) {
    RatVec u(g.central_rank());
    for (std::size_t j = 1; j < g.base_rank(); ++j)
        for (std::size_t i = 0; i < j; ++i) {
            Rat coeff = a[j] * b[i] - b[j] * a[i];
            if (coeff == 0) continue;
            const IntVec& lam = g.pairing(j, i);
            for (std::size_t k = 0; k < u.size(); ++k)
                if (lam[k] != 0) u[k] += Rat(lam[k]) * coeff;
        }
    return u;
}

RationalPoint bch_multiply(const TwoStepGroup& g, const RationalPoint& a,
                           const RationalPoint& b) {
    RationalPoint r;
    r.w.resize(a.w.size());
    r.u.resize(a.u.size());
    for (std::size_t i = 0; i < r.w.size(); ++i) r.w[i] = a.w[i] + b.w[i];
    RatVec br = lie_bracket(g, a.w, b.w);
    for (std::size_t k = 0; k < r.u.size(); ++k)
        r.u[k] = a.u[k] + b.u[k] + br[k] / 2;
    return r;
}

RationalPoint bch_inverse(const RationalPoint& a) {
    RationalPoint r = a;
    for (Rat& v : r.w) v = -v;
    for (Rat& v : r.u) v = -v;
    return r;
}

RationalPoint bch_power(const RationalPoint& a, const Int& k) {
    RationalPoint r = a;
    for (Rat& v : r.w) v *= Rat(k);
    for (Rat& v : r.u) v *= Rat(k);
    return r;
}

RationalPoint bch_root(const RationalPoint& a, const Int& k) {
    if (k == 0) throw DomainError("bch_root: k must be nonzero");
    RationalPoint r = a;
    for (Rat& v : r.w) v /= Rat(k);
    for (Rat& v : r.u) v /= Rat(k);
    return r;
}

RationalPoint log_coordinates(const TwoStepGroup& g, const GroupElement& e) {
    RationalPoint p;
    p.w.assign(e.x.begin(), e.x.end());
    p.u.assign(e.y.begin(), e.y.end());
    // log(a_1^{x_1} ... a_n^{x_n} c^y) = sum x_i v_i + y - (1/2) sum_{i<j}
    // x_i x_j lambda(j,i); the correction collects the pairwise BCH terms
    for (std::size_t j = 1; j < g.base_rank(); ++j)
        for (std::size_t i = 0; i < j; ++i) {
            Rat coeff = Rat(e.x[i] * e.x[j]) / 2;
            if (coeff == 0) continue;
            const IntVec& lam = g.pairing(j, i);
            for (std::size_t k = 0; k < p.u.size(); ++k)
                if (lam[k] != 0) p.u[k] -= Rat(lam[k]) * coeff;
        }
    return p;
}

RationalPoint embed_F(const TwoStepGroup& g, const GroupElement& e) {
    RationalPoint acc;
    acc.w.assign(g.base_rank(), Rat(0));
    acc.u.assign(g.central_rank(), Rat(0));
    for (std::size_t i = 0; i < g.base_rank(); ++i) {
        if (e.x[i] == 0) continue;
        RationalPoint gen;
        gen.w.assign(g.base_rank(), Rat(0));
        gen.u.assign(g.central_rank(), Rat(0));
        gen.w[i] = Rat(e.x[i]);
        acc = bch_multiply(g, acc, gen);
    }
    RationalPoint cent;
    cent.w.assign(g.base_rank(), Rat(0));
    cent.u.assign(e.y.begin(), e.y.end());
    return bch_multiply(g, acc, cent);
}

// ---------------------------------------------------------------------------
// Witt rank

namespace {

int moebius(long n) {
    int primes = 0;
    for (long q = 2; q * q <= n; ++q) {
        if (n % q != 0) continue;
        n /= q;
        if (n % q == 0) return 0; // square factor
        ++primes;
    }
    if (n > 1) ++primes;
    return primes % 2 == 0 ? 1 : -1;
}

Int int_pow(const Int& base, long e) {
    Int r = 1;
    for (long i = 0; i < e; ++i) r *= base;
    return r;
}

} // namespace

Int witt_rank(long r, long c) {
    if (r < 1 || c < 1) throw DomainError("witt_rank: need r, c >= 1");
    Int sum = 0;
    for (long dd = 1; dd <= c; ++dd) {
        if (c % dd != 0) continue;
        sum += Int(moebius(dd)) * int_pow(Int(r), c / dd);
    }
    return sum / c;
}

// ---------------------------------------------------------------------------
// automorphism sampling

namespace {

std::vector<std::vector<std::size_t>> graph_automorphisms(const Graph& gr) {
    const std::size_t n = gr.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<std::vector<std::size_t>> out;
    if (n > 8) return {perm}; // identity only; factorial search is too large
    do {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = i + 1; j < n && ok; ++j)
                if (gr.has_edge(i, j) != gr.has_edge(perm[i], perm[j])) ok = false;
        if (ok) out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

// link(v) subset of star(w): the usual gate for a_v -> a_v a_w^(+-1)
bool transvection_allowed(const Graph& gr, std::size_t v, std::size_t w) {
    for (std::size_t u = 0; u < gr.size(); ++u)
        if (gr.has_edge(v, u) && u != w && !gr.has_edge(w, u)) return false;
    return true;
}

} // namespace

Endo sample_automorphism(const TwoStepGroup& g, std::uint64_t seed,
                         unsigned word_length, long coeff_bound) {
    if (!g.provenance())
        throw DomainError("sample_automorphism: group has no graph provenance");
    const Graph& gr = *g.provenance();
    const std::size_t n = g.base_rank();

    auto auts = graph_automorphisms(gr);
    std::vector<std::pair<std::size_t, std::size_t>> transvections;
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t w = 0; w < n; ++w)
            if (v != w && transvection_allowed(gr, v, w)) transvections.emplace_back(v, w);
    const auto& center = g.center_base_directions();

    Rng rng(seed);
    Endo result = identity_endo(g);
    const long steps = rng.range(0, long(word_length));
    for (long step = 0; step < steps; ++step) {
        std::vector<GroupElement> images;
        for (std::size_t i = 0; i < n; ++i) images.push_back(g.generator(i));
        switch (rng.range(0, 3)) {
        case 0: { // graph-automorphism permutation
            const auto& perm = auts[std::size_t(rng.range(0, long(auts.size()) - 1))];
            for (std::size_t i = 0; i < n; ++i) images[i] = g.generator(perm[i]);
            break;
        }
        case 1: { // generator inversion
            std::size_t v = std::size_t(rng.range(0, long(n) - 1));
            images[v] = g.inverse(g.generator(v));
            break;
        }
        case 2: { // transvection
            if (transvections.empty()) continue;
            auto [v, w] = transvections[std::size_t(rng.range(0, long(transvections.size()) - 1))];
            GroupElement aw = g.generator(w);
            if (rng.coin()) aw = g.inverse(aw);
            images[v] = g.multiply(g.generator(v), aw);
            break;
        }
        default: { // central twist a_v -> a_v z
            std::size_t v = std::size_t(rng.range(0, long(n) - 1));
            IntVec zx(n), zy(g.central_rank());
            for (const IntVec& dir : center) {
                Int c = rng.range(-coeff_bound, coeff_bound);
                for (std::size_t r = 0; r < n; ++r) zx[r] += c * dir[r];
            }
            for (Int& v2 : zy) v2 = rng.range(-coeff_bound, coeff_bound);
            images[v] = g.multiply(g.generator(v), g.make_element(zx, zy));
            break;
        }
        }
        Endo move = make_endomorphism(g, std::move(images));
        if (!is_automorphism(g, move)) continue; // e.g. an invalid central twist
        result = compose(g, move, result);
    }
    if (!is_automorphism(g, result))
        throw InternalError("sample_automorphism: sampled word is not an automorphism");
    return result;
}

} // namespace nilspec
