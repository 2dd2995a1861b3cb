#include "logfrob/forms.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <optional>
#include <set>

#include <Eigen/Dense>

#include "logfrob/error.hpp"

namespace logfrob {

Weight to_weight(const IVec& m)
{
    Weight w(m.size());
    for (int i = 0; i < m.size(); ++i)
        w[i] = m(i);
    return w;
}

IVec to_ivec(const Weight& m)
{
    IVec v(static_cast<int>(m.size()));
    for (size_t i = 0; i < m.size(); ++i)
        v(static_cast<int>(i)) = static_cast<int>(m[i]);
    return v;
}

Weight add_weights(const Weight& a, const Weight& b)
{
    LF_ASSERT(a.size() == b.size(), "weight size mismatch");
    Weight c(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        c[i] = a[i] + b[i];
    return c;
}

Weight scale_weight(const Weight& a, int64_t c)
{
    Weight out(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        out[i] = c * a[i];
    return out;
}

FormSum FormSum::monomial(int n, const Weight& m, uint32_t wedge, Fp c)
{
    FormSum f(n);
    f.add_term(m, wedge, c);
    return f;
}

FormSum FormSum::constant(int n, Fp c)
{
    return monomial(n, Weight(n, 0), 0u, c);
}

void FormSum::add_term(const Weight& m, uint32_t wedge, Fp c)
{
    if (c.is_zero())
        return;
    MonoKey key{m, wedge};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(key, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero())
        terms_.erase(it);
}

FormSum FormSum::operator+(const FormSum& o) const
{
    FormSum out = *this;
    for (const auto& [k, c] : o.terms_)
        out.add_term(k.m, k.wedge, c);
    return out;
}

FormSum FormSum::operator-(const FormSum& o) const
{
    FormSum out = *this;
    for (const auto& [k, c] : o.terms_)
        out.add_term(k.m, k.wedge, -c);
    return out;
}

FormSum FormSum::operator*(Fp c) const
{
    FormSum out(n_);
    for (const auto& [k, v] : terms_)
        out.add_term(k.m, k.wedge, v * c);
    return out;
}

bool FormSum::operator==(const FormSum& o) const
{
    return n_ == o.n_ && terms_ == o.terms_;
}

FormSum FormSum::d() const
{
    FormSum out(n_);
    for (const auto& [k, c] : terms_) {
        for (int j = 0; j < n_; ++j) {
            Fp mj(k.m[j]);
            if (mj.is_zero() || (k.wedge & (1u << j)))
                continue;
            int sg = wedge_sign(1u << j, k.wedge);
            out.add_term(k.m, k.wedge | (1u << j), c * mj * Fp(sg));
        }
    }
    return out;
}

FormSum FormSum::wedge(const FormSum& o) const
{
    FormSum out(n_);
    for (const auto& [k1, c1] : terms_) {
        for (const auto& [k2, c2] : o.terms_) {
            int sg = wedge_sign(k1.wedge, k2.wedge);
            if (sg == 0)
                continue;
            out.add_term(add_weights(k1.m, k2.m), k1.wedge | k2.wedge,
                         c1 * c2 * Fp(sg));
        }
    }
    return out;
}

FormSum FormSum::contract(const IVec& rho) const
{
    FormSum out(n_);
    for (const auto& [k, c] : terms_) {
        for (uint32_t mm = k.wedge; mm; mm &= mm - 1) {
            int el = std::countr_zero(mm);
            Fp coef(rho(el));
            if (coef.is_zero())
                continue;
            out.add_term(k.m, k.wedge & ~(1u << el),
                         c * coef * Fp(removal_sign(k.wedge, el)));
        }
    }
    return out;
}

FormSum FormSum::component(int degree) const
{
    FormSum out(n_);
    for (const auto& [k, c] : terms_)
        if (std::popcount(k.wedge) == degree)
            out.add_term(k.m, k.wedge, c);
    return out;
}

FormSum FormSum::component_weight(const Weight& m) const
{
    FormSum out(n_);
    for (const auto& [k, c] : terms_)
        if (k.m == m)
            out.add_term(k.m, k.wedge, c);
    return out;
}

std::vector<Weight> FormSum::weights() const
{
    std::set<Weight> seen;
    for (const auto& [k, c] : terms_)
        seen.insert(k.m);
    return {seen.begin(), seen.end()};
}

FormSum FormSum::pullback(const IMat& a) const
{
    // a : source characters -> target characters (rows = target dim)
    int n_dst = static_cast<int>(a.rows());
    FormSum out(n_dst);
    MatF ap(n_dst, n_);
    for (int i = 0; i < n_dst; ++i)
        for (int j = 0; j < n_; ++j)
            ap(i, j) = Fp(a(i, j));
    for (const auto& [k, c] : terms_) {
        IVec m_src = to_ivec(k.m);
        IVec m_dst = a * m_src;
        int deg = std::popcount(k.wedge);
        MatF lam = exterior_power(ap, deg);
        int col = wedge_index(n_, k.wedge);
        const auto& dst_masks = wedge_masks(n_dst, deg);
        for (size_t r = 0; r < dst_masks.size(); ++r) {
            Fp v = lam(static_cast<int>(r), col);
            if (!v.is_zero())
                out.add_term(to_weight(m_dst), dst_masks[r], c * v);
        }
    }
    return out;
}

FormSum FormSum::shift_weight(const Weight& m) const
{
    FormSum out(n_);
    for (const auto& [k, c] : terms_)
        out.add_term(add_weights(k.m, m), k.wedge, c);
    return out;
}

VecF wedge_vector(const FormSum& f, const Weight& m, int n, int degree)
{
    const auto& masks = wedge_masks(n, degree);
    VecF v = VecF::Zero(static_cast<int>(masks.size()));
    for (const auto& [k, c] : f.terms()) {
        if (k.m != m || std::popcount(k.wedge) != degree)
            continue;
        v(wedge_index(n, k.wedge)) = c;
    }
    return v;
}

FormSum from_wedge_vector(const VecF& v, const Weight& m, int n, int degree)
{
    const auto& masks = wedge_masks(n, degree);
    FormSum f(n);
    for (size_t i = 0; i < masks.size(); ++i)
        f.add_term(m, masks[i], v(static_cast<int>(i)));
    return f;
}

namespace {

// Integer row-style HNF of the kernel of pairing with the given rays:
// returns a Z-basis (rows) of {m in Z^n : <m, rho> = 0 for all rho}.
IMat integer_kernel(const std::vector<IVec>& rhos, int n)
{
    // Column-reduce the pairing matrix over Z by unimodular column ops,
    // tracking the transformation; kernel columns are those reduced to 0.
    int k = static_cast<int>(rhos.size());
    Eigen::Matrix<int64_t, Eigen::Dynamic, Eigen::Dynamic> a(k, n);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = rhos[i](j);
    Eigen::Matrix<int64_t, Eigen::Dynamic, Eigen::Dynamic> u =
        Eigen::Matrix<int64_t, Eigen::Dynamic, Eigen::Dynamic>::Identity(n,
                                                                         n);
    int lead = 0;
    for (int r = 0; r < k && lead < n; ++r) {
        // find a column with nonzero entry in row r at position >= lead
        int piv = -1;
        for (int c = lead; c < n; ++c)
            if (a(r, c) != 0) {
                piv = c;
                break;
            }
        if (piv < 0)
            continue;
        a.col(piv).swap(a.col(lead));
        u.col(piv).swap(u.col(lead));
        bool progress = true;
        while (progress) {
            progress = false;
            for (int c = lead + 1; c < n; ++c) {
                if (a(r, c) == 0)
                    continue;
                int64_t q = a(r, c) / a(r, lead);
                a.col(c) -= q * a.col(lead);
                u.col(c) -= q * u.col(lead);
                if (a(r, c) != 0) {
                    a.col(c).swap(a.col(lead));
                    u.col(c).swap(u.col(lead));
                    progress = true;
                }
            }
        }
        ++lead;
    }
    IMat out(n - lead, n);
    for (int c = lead; c < n; ++c)
        for (int j = 0; j < n; ++j)
            out(c - lead, j) = static_cast<int>(u(j, c));
    return out;
}

std::vector<int> local_indices(const ChartContext& ctx,
                               const std::vector<int>& ray_ids)
{
    std::vector<int> loc;
    for (int rid : ray_ids) {
        auto it = std::find(ctx.ray_ids.begin(), ctx.ray_ids.end(), rid);
        LF_CHECK(it != ctx.ray_ids.end(), "BadFace",
                 "ray " + std::to_string(rid) + " not in the chart cone");
        loc.push_back(static_cast<int>(it - ctx.ray_ids.begin()));
    }
    return loc;
}

} // namespace

IMat annihilator_basis(const ChartContext& ctx,
                       const std::vector<int>& ray_ids)
{
    auto loc = local_indices(ctx, ray_ids);
    std::vector<IVec> rhos;
    for (int j : loc)
        rhos.push_back(ctx.rays[j]);
    return integer_kernel(rhos, ctx.n);
}

ResidueTarget residue_target(const ChartContext& ctx,
                             const std::vector<int>& ray_ids)
{
    auto loc = local_indices(ctx, ray_ids);
    ResidueTarget out;
    out.basis = annihilator_basis(ctx, ray_ids);
    int nq = static_cast<int>(out.basis.rows());
    ChartContext q;
    q.n = nq;
    for (size_t j = 0; j < ctx.rays.size(); ++j) {
        if (std::find(loc.begin(), loc.end(), static_cast<int>(j)) !=
            loc.end())
            continue;
        IVec rq(nq);
        for (int t = 0; t < nq; ++t) {
            int64_t s = 0;
            for (int x = 0; x < ctx.n; ++x)
                s += static_cast<int64_t>(out.basis(t, x)) * ctx.rays[j](x);
            rq(t) = static_cast<int>(s);
        }
        q.ray_ids.push_back(ctx.ray_ids[j]);
        q.rays.push_back(rq);
        q.in_divisor.push_back(false); // plain forms on the stratum
        q.shift.push_back(0);
    }
    out.quotient_ctx = q;
    return out;
}

namespace {

// Express a weight annihilating the stratum in the annihilator basis.
std::optional<IVec> in_basis_coords(const IMat& basis, const IVec& m)
{
    // solve basis^T c = m over the integers; basis rows are primitive and
    // unimodularly extendable, so plain elimination over Q followed by an
    // integrality check suffices at desk scale.
    int nq = static_cast<int>(basis.rows());
    int n = static_cast<int>(basis.cols());
    if (nq == 0) {
        for (int i = 0; i < n; ++i)
            if (m(i) != 0)
                return std::nullopt;
        return IVec(0);
    }
    Eigen::MatrixXd bt(n, nq);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < nq; ++j)
            bt(i, j) = basis(j, i);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i)
        rhs(i) = static_cast<double>(m(i));
    Eigen::VectorXd sol = bt.colPivHouseholderQr().solve(rhs);
    IVec c(nq);
    for (int j = 0; j < nq; ++j) {
        double v = sol(j);
        double r = std::llround(v);
        if (std::abs(v - r) > 1e-6)
            return std::nullopt;
        c(j) = static_cast<int>(std::llround(v));
    }
    // certify exactly over the integers
    for (int i = 0; i < n; ++i) {
        int64_t s = 0;
        for (int j = 0; j < nq; ++j)
            s += static_cast<int64_t>(basis(j, i)) * c(j);
        if (s != m(i))
            return std::nullopt;
    }
    return c;
}

} // namespace

FormSum residue(const ChartContext& ctx, const FormSum& omega,
                const std::vector<int>& ray_ids, bool enforce_level)
{
    auto loc = local_indices(ctx, ray_ids);
    for (size_t t = 0; t < loc.size(); ++t)
        LF_CHECK(ctx.in_divisor[loc[t]], "BadFace",
                 "residue ray " + std::to_string(ray_ids[t]) +
                     " is not a divisor component");
    LF_CHECK(std::is_sorted(ray_ids.begin(), ray_ids.end()), "BadFace",
             "residue ray list must be sorted");

    int l = static_cast<int>(ray_ids.size());
    if (enforce_level) {
        // the W_{|I|} domain, on which the image is a plain form
        for (const auto& m : omega.weights()) {
            for (int deg = 0; deg <= ctx.n; ++deg) {
                VecF v = wedge_vector(omega, m, ctx.n, deg);
                bool nonzero = false;
                for (int t = 0; t < v.size(); ++t)
                    if (!v(t).is_zero())
                        nonzero = true;
                if (!nonzero)
                    continue;
                Subspace wl = weight_slice(ctx, to_ivec(m), deg, l);
                LF_CHECK(wl.contains(v), "NotInWeightLevel",
                         "form is not in weight level " +
                             std::to_string(l));
            }
        }
    }

    ResidueTarget tgt = residue_target(ctx, ray_ids);
    FormSum out(static_cast<int>(tgt.basis.rows()));
    for (const auto& m : omega.weights()) {
        // x^m restricts to zero on the stratum unless m annihilates it
        bool perp = true;
        IVec mi = to_ivec(m);
        for (int j : loc) {
            int64_t s = 0;
            for (int x = 0; x < ctx.n; ++x)
                s += static_cast<int64_t>(mi(x)) * ctx.rays[j](x);
            if (s != 0)
                perp = false;
        }
        if (!perp)
            continue;
        FormSum part = omega.component_weight(m);
        // contract left-to-right in increasing ray order
        for (int j : loc)
            part = part.contract(ctx.rays[j]);
        auto coords = in_basis_coords(tgt.basis, mi);
        LF_ASSERT(coords.has_value(),
                  "residue weight not in the stratum lattice");
        // rewrite the wedge part in the annihilator basis
        MatF g(static_cast<int>(tgt.basis.rows()), ctx.n);
        for (int r = 0; r < tgt.basis.rows(); ++r)
            for (int c = 0; c < ctx.n; ++c)
                g(r, c) = Fp(tgt.basis(r, c));
        for (int deg = 0; deg <= ctx.n; ++deg) {
            VecF v = wedge_vector(part, m, ctx.n, deg);
            bool nonzero = false;
            for (int t = 0; t < v.size(); ++t)
                if (!v(t).is_zero())
                    nonzero = true;
            if (!nonzero)
                continue;
            // solve Lambda^deg(g^T) x = v
            MatF lam = exterior_power(g.transpose(), deg);
            auto x = solve(lam, v);
            LF_ASSERT(x.has_value(),
                      "residue does not lie in the stratum wedge algebra");
            out = out + from_wedge_vector(*x, to_weight(*coords),
                                          static_cast<int>(tgt.basis.rows()),
                                          deg);
        }
    }
    return out;
}

GrDecomposition gr_weight_decompose(const ChartContext& ctx, const IVec& m,
                                    int i, int l)
{
    GrDecomposition out;
    Subspace wl = weight_slice(ctx, m, i, l);
    Subspace wlm = weight_slice(ctx, m, i, l - 1);
    out.source = Quotient(wl, wlm);

    // strata: l-subsets of the chart's divisor rays annihilating m
    std::vector<int> div_rays;
    for (size_t j = 0; j < ctx.ray_ids.size(); ++j) {
        if (!ctx.in_divisor[j])
            continue;
        int64_t s = 0;
        for (int x = 0; x < ctx.n; ++x)
            s += static_cast<int64_t>(m(x)) * ctx.rays[j](x);
        if (s == 0)
            div_rays.push_back(ctx.ray_ids[j]);
    }
    // lex enumeration of l-subsets
    std::vector<std::vector<int>> subsets;
    std::vector<int> pick;
    std::function<void(size_t)> rec = [&](size_t start) {
        if (static_cast<int>(pick.size()) == l) {
            subsets.push_back(pick);
            return;
        }
        for (size_t t = start; t < div_rays.size(); ++t) {
            pick.push_back(div_rays[t]);
            rec(t + 1);
            pick.pop_back();
        }
    };
    if (l == 0)
        subsets.push_back({});
    else if (l <= static_cast<int>(div_rays.size()))
        rec(0);

    int total = 0;
    std::vector<ResidueTarget> targets;
    std::vector<Subspace> target_spaces;
    for (const auto& I : subsets) {
        ResidueTarget tgt = residue_target(ctx, I);
        auto coords = in_basis_coords(tgt.basis, m);
        LF_ASSERT(coords.has_value(), "stratum weight escape");
        Subspace sp = form_space(tgt.quotient_ctx, *coords, i - l);
        out.strata.push_back(I);
        out.target_dims.push_back(sp.dim());
        targets.push_back(tgt);
        target_spaces.push_back(sp);
        total += sp.dim();
    }

    MatF mat = MatF::Zero(total, out.source.dim());
    for (int c = 0; c < out.source.dim(); ++c) {
        VecF rep = out.source.reps().row(c).transpose();
        FormSum f = from_wedge_vector(rep, to_weight(m), ctx.n, i);
        int row0 = 0;
        for (size_t t = 0; t < subsets.size(); ++t) {
            FormSum res = f;
            auto loc = local_indices(ctx, subsets[t]);
            for (int j : loc)
                res = res.contract(ctx.rays[j]);
            auto coords = in_basis_coords(targets[t].basis, m);
            MatF g(static_cast<int>(targets[t].basis.rows()), ctx.n);
            for (int r = 0; r < targets[t].basis.rows(); ++r)
                for (int cc = 0; cc < ctx.n; ++cc)
                    g(r, cc) = Fp(targets[t].basis(r, cc));
            VecF v = wedge_vector(res, to_weight(m), ctx.n, i - l);
            MatF lam = exterior_power(g.transpose(), i - l);
            auto x = solve(lam, v);
            LF_ASSERT(x.has_value(), "residue outside stratum algebra");
            LF_CHECK(target_spaces[t].contains(*x), "DecompositionFailure",
                     "residue image is not a regular form on the stratum");
            VecF tc = target_spaces[t].coords_of(*x);
            for (int r = 0; r < tc.size(); ++r)
                mat(row0 + r, c) = tc(r);
            row0 += target_spaces[t].dim();
        }
    }
    LF_CHECK(total == out.source.dim() && rank_of(mat) == total,
             "DecompositionFailure",
             "residue decomposition matrix is not bijective");
    out.matrix = mat;
    return out;
}

} // namespace logfrob
