#include "logfrob/frobsplit.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "logfrob/error.hpp"

namespace logfrob {

FrobLift FrobLift::canonical(const Atlas& atlas)
{
    FrobLift lift;
    lift.charts.resize(atlas.num_charts());
    return lift;
}

namespace {

int64_t pair_int(const IVec& m, const IVec& rho)
{
    int64_t s = 0;
    for (int i = 0; i < m.size(); ++i)
        s += static_cast<int64_t>(m(i)) * rho(i);
    return s;
}

// Laurent polynomial over Z/p^2, used only by the validation oracle.
using LaurentZp2 = std::map<Weight, Zp2>;

void lz_add(LaurentZp2& a, const Weight& m, Zp2 c)
{
    if (c == Zp2())
        return;
    auto it = a.find(m);
    if (it == a.end()) {
        a.emplace(m, c);
        return;
    }
    it->second = it->second + c;
    if (it->second == Zp2())
        a.erase(it);
}

LaurentZp2 lz_mul(const LaurentZp2& a, const LaurentZp2& b)
{
    LaurentZp2 out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b)
            lz_add(out, add_weights(ma, mb), ca * cb);
    return out;
}

LaurentZp2 lz_pow(int n, LaurentZp2 base, int64_t e)
{
    LF_ASSERT(e >= 0, "negative exponent in lift oracle");
    LaurentZp2 acc;
    acc.emplace(Weight(n, 0), Zp2(1));
    while (e) {
        if (e & 1)
            acc = lz_mul(acc, base);
        base = lz_mul(base, base);
        e >>= 1;
    }
    return acc;
}

} // namespace

void validate_lift(const Atlas& atlas, const FrobLift& lift)
{
    LF_CHECK(lift.charts.size() == static_cast<size_t>(atlas.num_charts()),
             "SpecParseError", "lift must carry one entry per chart");
    int p = atlas.p;
    for (int c = 0; c < atlas.num_charts(); ++c) {
        const ChartContext& ctx = atlas.charts[c];
        for (const auto& [local, pert] : lift.charts[c]) {
            LF_CHECK(local >= 0 &&
                         local < static_cast<int>(ctx.rays.size()),
                     "SpecParseError", "lift ray index out of range");
            for (const auto& [key, coef] : pert.terms()) {
                LF_CHECK(key.wedge == 0, "SpecParseError",
                         "lift perturbation must be a function");
                for (size_t j = 0; j < ctx.rays.size(); ++j)
                    LF_CHECK(pair_int(to_ivec(key.m), ctx.rays[j]) >= 0,
                             "NotRegular",
                             "perturbation monomial is not regular on "
                             "chart " +
                                 std::to_string(c));
            }
        }

        // Z/p^2 oracle: expand F(x^m) for the adapted basis characters and
        // a couple of their sums, divide the deviation from x^{pm} by p and
        // compare with the linear divided-part formula.
        IMat dual = adapted_dual_basis(atlas.fan, atlas.fan.max_cones[c]);
        int n = atlas.fan.n;
        std::vector<IVec> samples;
        for (int t = 0; t < n; ++t)
            samples.push_back(dual.row(t).transpose());
        {
            IVec s = IVec::Zero(n);
            for (int t = 0; t < n; ++t)
                s += (t + 1) * IVec(dual.row(t).transpose());
            samples.push_back(s);
        }
        for (const IVec& m : samples) {
            // adapted exponents a_t = <m, rho_t>
            LaurentZp2 value;
            lz_add(value, Weight(n, 0), Zp2(1));
            FormSum divided_expect(n);
            for (size_t t = 0; t < ctx.rays.size(); ++t) {
                int64_t a = pair_int(m, ctx.rays[t]);
                LF_ASSERT(a >= 0, "sample character outside the cone dual");
                if (a == 0)
                    continue;
                Weight mt = to_weight(IVec(dual.row(static_cast<int>(t))
                                               .transpose()));
                FormSum pert;
                auto it = lift.charts[c].find(static_cast<int>(t));
                pert = (it == lift.charts[c].end()) ? FormSum(n) : it->second;
                // F(t_t) as Laurent series over Z/p^2
                LaurentZp2 ft;
                lz_add(ft, scale_weight(mt, p), Zp2(1));
                for (const auto& [key, coef] : pert.terms()) {
                    Weight w = ctx.in_divisor[t]
                                   ? add_weights(scale_weight(mt, p), key.m)
                                   : key.m;
                    lz_add(ft, w, Zp2(p) * Zp2(coef.value()));
                }
                value = lz_mul(value, lz_pow(n, ft, a));
                // linear formula: a_t * x^{pm} * eps_t
                FormSum eps = ctx.in_divisor[t]
                                  ? pert
                                  : pert.shift_weight(
                                        scale_weight(mt, -static_cast<int64_t>(p)));
                divided_expect =
                    divided_expect +
                    eps.shift_weight(scale_weight(to_weight(m), p)) *
                        Fp(a);
            }
            // subtract x^{pm}, divide by p, reduce
            Weight pm = scale_weight(to_weight(m), p);
            lz_add(value, pm, -Zp2(1));
            FormSum divided(n);
            for (const auto& [w, coef] : value)
                divided.add_term(w, 0u, coef.divided_by_p());
            LF_ASSERT(divided == divided_expect,
                      "lift oracle: divided parts disagree with the "
                      "Z/p^2 expansion");
        }
    }
}

SplitData::SplitData(const Atlas& atlas, const FrobLift& lift)
    : atlas_(&atlas)
{
    validate_lift(atlas, lift);
    int n = atlas.fan.n;
    int p = atlas.p;
    ebar_.resize(atlas.num_charts());
    for (int c = 0; c < atlas.num_charts(); ++c) {
        const ChartContext& ctx = atlas.charts[c];
        IMat dual = adapted_dual_basis(atlas.fan, atlas.fan.max_cones[c]);
        // eps_t: the divided part of F(t_t)/t_t^p
        std::vector<FormSum> eps(ctx.rays.size(), FormSum(n));
        for (size_t t = 0; t < ctx.rays.size(); ++t) {
            auto it = lift.charts[c].find(static_cast<int>(t));
            if (it == lift.charts[c].end())
                continue;
            if (ctx.in_divisor[t]) {
                eps[t] = it->second;
            } else {
                Weight mt =
                    to_weight(IVec(dual.row(static_cast<int>(t)).transpose()));
                eps[t] = it->second.shift_weight(
                    scale_weight(mt, -static_cast<int64_t>(p)));
            }
        }
        // Ebar on the standard basis: e_j = sum_t <e_j, rho_t> m_t
        ebar_[c].assign(n, FormSum(n));
        for (int j = 0; j < n; ++j)
            for (size_t t = 0; t < ctx.rays.size(); ++t)
                ebar_[c][j] = ebar_[c][j] + eps[t] * Fp(ctx.rays[t](j));
    }
}

FormSum SplitData::zeta(int chart, const FormSum& one_form) const
{
    int n = atlas_->fan.n;
    int p = atlas_->p;
    FormSum out(n);
    for (const auto& [key, c] : one_form.terms()) {
        LF_ASSERT(std::popcount(key.wedge) == 1, "zeta expects a one-form");
        int j = std::countr_zero(key.wedge);
        Weight pm = scale_weight(key.m, p);
        out.add_term(pm, key.wedge, c);
        out = out + ebar_[chart][j].d().shift_weight(pm) * c;
    }
    return out;
}

FormSum SplitData::h(int chart_a, int chart_b, const FormSum& one_form) const
{
    int n = atlas_->fan.n;
    int p = atlas_->p;
    FormSum out(n);
    for (const auto& [key, c] : one_form.terms()) {
        LF_ASSERT(std::popcount(key.wedge) == 1, "h expects a one-form");
        int j = std::countr_zero(key.wedge);
        Weight pm = scale_weight(key.m, p);
        out = out +
              (ebar_[chart_b][j] - ebar_[chart_a][j]).shift_weight(pm) * c;
    }
    return out;
}

Cochain SplitData::phi_one(const FormSum& one_form) const
{
    Cochain out(*atlas_);
    int nc = atlas_->num_charts();
    for (int a = 0; a < nc; ++a)
        out.add(atlas_->tuple_id({a}), 1, zeta(a, one_form));
    for (int a = 0; a < nc; ++a)
        for (int b = a + 1; b < nc; ++b)
            out.add(atlas_->tuple_id({a, b}), 0, h(a, b, one_form));
    return out;
}

namespace {

void permutations(int i, std::vector<std::pair<std::vector<int>, int>>& out)
{
    std::vector<int> perm(i);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        int sign = 1;
        for (int a = 0; a < i; ++a)
            for (int b = a + 1; b < i; ++b)
                if (perm[a] > perm[b])
                    sign = -sign;
        out.emplace_back(perm, sign);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

Fp inv_factorial(int i)
{
    Fp f(1);
    for (int t = 2; t <= i; ++t)
        f *= Fp(t);
    return f.inv();
}

} // namespace

Cochain SplitData::phi(int degree, const FormSum& form) const
{
    LF_CHECK(degree < atlas_->p, "DegreeTooHigh",
             "phi requires degree < p");
    int n = atlas_->fan.n;
    int p = atlas_->p;
    Cochain out(*atlas_);
    if (degree == 0) {
        for (const auto& [key, c] : form.terms()) {
            LF_ASSERT(key.wedge == 0, "degree-0 phi expects a function");
            for (int a = 0; a < atlas_->num_charts(); ++a)
                out.add(atlas_->tuple_id({a}), 0,
                        FormSum::monomial(n, scale_weight(key.m, p), 0u, c));
        }
        return out;
    }
    std::vector<std::pair<std::vector<int>, int>> perms;
    permutations(degree, perms);
    Fp inv_fact = inv_factorial(degree);
    for (const auto& [key, c] : form.terms()) {
        LF_ASSERT(std::popcount(key.wedge) == degree,
                  "phi: wedge degree mismatch");
        std::vector<int> factors;
        for (uint32_t mm = key.wedge; mm; mm &= mm - 1)
            factors.push_back(std::countr_zero(mm));
        Cochain term(*atlas_);
        for (const auto& [perm, sign] : perms) {
            Cochain cup(*atlas_);
            bool first = true;
            for (int t = 0; t < degree; ++t) {
                FormSum gen = FormSum::monomial(
                    n, Weight(n, 0), 1u << factors[perm[t]], Fp(1));
                Cochain leg = phi_one(gen);
                cup = first ? leg : cup.cup(leg);
                first = false;
            }
            term = term + cup * Fp(sign);
        }
        // O'-linearity over x^{pm} and the 1/i! of delta_i
        Cochain shifted(*atlas_);
        for (const auto& [ent, f] : term.entries())
            shifted.add(ent.first, ent.second,
                        f.shift_weight(scale_weight(key.m, p)));
        out = out + shifted * (c * inv_fact);
    }
    return out;
}

Cochain SplitData::phi_on_cochain(const Cochain& higgs_cochain) const
{
    // Front-back composition of the cochain with the per-section splitting:
    // Phi(c) = sum over entries of (indicator cochain) cup phi(value), so
    // no extra sign appears and the chain-map property follows from the
    // cup Leibniz rule.
    Cochain out(*atlas_);
    for (const auto& [ent, val] : higgs_cochain.entries()) {
        const auto& t = atlas_->tuples[ent.first].charts;
        Cochain pc = phi(ent.second, val);
        for (const auto& [pent, g] : pc.entries()) {
            const auto& u = atlas_->tuples[pent.first].charts;
            if (t.back() != u.front())
                continue;
            std::vector<int> joined = t;
            joined.insert(joined.end(), u.begin() + 1, u.end());
            bool increasing = true;
            for (size_t x = 1; x < joined.size(); ++x)
                if (joined[x - 1] >= joined[x])
                    increasing = false;
            if (!increasing)
                continue;
            out.add(atlas_->tuple_id(joined), pent.second, g);
        }
    }
    return out;
}

PsiMatrix psi_on_cohomology(Session& session, const SplitData& split,
                            int mdeg)
{
    const Atlas& atlas = session.atlas();
    LF_CHECK(atlas.validity.dim_less_p, "DegreeTooHigh",
             "psi requires dim X < p");
    int n = atlas.fan.n;

    PsiMatrix out;
    // dR-side basis
    std::vector<std::pair<Weight, int>> rows;
    for (const auto& m : session.support()) {
        const SolvedComplex& s = session.weight(m);
        for (int x = 0; x < s.h_dim(mdeg); ++x) {
            out.rows.push_back({to_weight(m), x});
            rows.emplace_back(to_weight(m), x);
        }
    }
    // Higgs-side basis and the matrix columns
    std::vector<VecF> cols;
    for (int i = 0; i <= std::min(n, mdeg); ++i) {
        int r = mdeg - i;
        if (r > atlas.num_charts() - 1)
            continue;
        for (const auto& m : session.support()) {
            SolvedComplex sheaf =
                solve_complex(build_sheaf_complex(atlas, m, i, std::nullopt));
            if (r > sheaf.C.kmax)
                continue;
            for (int x = 0; x < sheaf.h_dim(r); ++x) {
                VecF rep = sheaf.H[r].reps().row(x).transpose();
                Cochain higgs =
                    extract_cochain(sheaf.C, atlas, rep, r);
                Cochain image = split.phi_on_cochain(higgs);
                auto classes = session.class_of(image, mdeg);
                VecF col = VecF::Zero(static_cast<int>(rows.size()));
                for (size_t rr = 0; rr < rows.size(); ++rr) {
                    auto it = classes.find(rows[rr].first);
                    if (it != classes.end())
                        col(static_cast<int>(rr)) =
                            it->second(rows[rr].second);
                }
                cols.push_back(col);
                out.cols.push_back({i, to_weight(m), x});
            }
        }
    }
    LF_CHECK(cols.size() == rows.size(), "NotInvertible",
             "Higgs and de Rham dimensions disagree in degree " +
                 std::to_string(mdeg));
    MatF mat(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c)
        mat.col(static_cast<int>(c)) = cols[c];
    LF_CHECK(rank_of(mat) == static_cast<int>(rows.size()), "NotInvertible",
             "splitting matrix is singular in degree " +
                 std::to_string(mdeg));
    out.matrix = mat;
    return out;
}

MorphismData make_morphism_data(const ToricMorphism& mor)
{
    MorphismData md;
    md.mor = mor;
    md.chi = chart_assignment(mor);
    md.char_map = mor.lattice_map.transpose();
    return md;
}

MorphismData identity_morphism(const Fan& fan, const DivisorSet& divisor)
{
    ToricMorphism mor;
    mor.lattice_map = IMat::Identity(fan.n, fan.n);
    mor.source = fan;
    mor.target = fan;
    mor.source_divisor = divisor;
    mor.target_divisor = divisor;
    return make_morphism_data(mor);
}

Cochain pullback_cochain(const MorphismData& md, const Atlas& src_atlas,
                         const Atlas& dst_atlas, const Cochain& c)
{
    Cochain out(src_atlas);
    for (size_t t = 0; t < src_atlas.tuples.size(); ++t) {
        const auto& xt = src_atlas.tuples[t].charts;
        std::vector<int> mapped;
        for (int ch : xt)
            mapped.push_back(md.chi[ch]);
        auto [sign, id] = alternating_tuple(dst_atlas, mapped);
        if (sign == 0)
            continue;
        for (int s = 0; s <= dst_atlas.fan.n; ++s) {
            FormSum g = c.get(id, s);
            if (g.is_zero())
                continue;
            out.add(static_cast<int>(t), s,
                    g.pullback(md.char_map) * Fp(sign));
        }
    }
    return out;
}

FormSum pullback_form(const MorphismData& md, const FormSum& f)
{
    return f.pullback(md.char_map);
}

Cochain eta_one(const MorphismData& md, const Atlas& src_atlas,
                const SplitData& split_src, const SplitData& split_dst,
                const FormSum& one_form)
{
    int p = src_atlas.p;
    Cochain out(src_atlas);
    for (int a = 0; a < src_atlas.num_charts(); ++a) {
        FormSum val(src_atlas.fan.n);
        for (const auto& [key, c] : one_form.terms()) {
            LF_ASSERT(std::popcount(key.wedge) == 1,
                      "eta_1 expects a one-form");
            int j = std::countr_zero(key.wedge);
            // f^*(Ebar^Y_{chi(a)}(e_j)) - Ebar^X_a(A^T e_j)
            FormSum diff =
                split_dst.ebar(md.chi[a], j).pullback(md.char_map);
            for (int k = 0; k < src_atlas.fan.n; ++k) {
                int coef = md.char_map(k, j);
                if (coef != 0)
                    diff = diff - split_src.ebar(a, k) * Fp(coef);
            }
            IVec pm = md.char_map * to_ivec(key.m);
            val = val +
                  diff.shift_weight(scale_weight(to_weight(pm), p)) * c;
        }
        out.add(src_atlas.tuple_id({a}), 0, val);
    }
    return out;
}

Cochain eta(const MorphismData& md, const Atlas& src_atlas,
            const SplitData& split_src, const SplitData& split_dst,
            int degree, const FormSum& form)
{
    LF_CHECK(degree < src_atlas.p, "DegreeTooHigh",
             "eta requires degree < p");
    int n_dst = static_cast<int>(md.char_map.cols());
    int p = src_atlas.p;
    Cochain out(src_atlas);
    if (degree == 0)
        return out;
    std::vector<std::pair<std::vector<int>, int>> perms;
    permutations(degree, perms);
    Fp inv_fact = inv_factorial(degree);
    const Atlas& dst_atlas = split_dst.atlas();
    for (const auto& [key, c] : form.terms()) {
        std::vector<int> factors;
        for (uint32_t mm = key.wedge; mm; mm &= mm - 1)
            factors.push_back(std::countr_zero(mm));
        LF_ASSERT(static_cast<int>(factors.size()) == degree,
                  "eta: wedge degree mismatch");
        Cochain term(src_atlas);
        for (const auto& [perm, sign] : perms) {
            for (int j = 0; j < degree; ++j) {
                Cochain cup(src_atlas);
                bool first = true;
                auto append = [&](const Cochain& leg) {
                    cup = first ? leg : cup.cup(leg);
                    first = false;
                };
                for (int t = 0; t < degree; ++t) {
                    FormSum gen = FormSum::monomial(
                        n_dst, Weight(n_dst, 0), 1u << factors[perm[t]],
                        Fp(1));
                    if (t < j) {
                        append(split_src.phi(1, pullback_form(md, gen)));
                    } else if (t == j) {
                        append(eta_one(md, src_atlas, split_src, split_dst,
                                       gen));
                    } else {
                        append(pullback_cochain(md, src_atlas, dst_atlas,
                                                split_dst.phi(1, gen)));
                    }
                }
                int sg = (j % 2 == 0 ? 1 : -1) * sign;
                term = term + cup * Fp(sg);
            }
        }
        IVec pm = md.char_map * to_ivec(key.m);
        Cochain shifted(src_atlas);
        for (const auto& [ent, f] : term.entries())
            shifted.add(ent.first, ent.second,
                        f.shift_weight(scale_weight(to_weight(pm), p)));
        out = out + shifted * (c * inv_fact);
    }
    return out;
}

HomotopyCheck homotopy_check(const MorphismData& md, const Atlas& src_atlas,
                             const Atlas& dst_atlas,
                             const SplitData& split_src,
                             const SplitData& split_dst, int degree,
                             const FormSum& form)
{
    HomotopyCheck out{Cochain(src_atlas), Cochain(src_atlas), false};
    Cochain fy = pullback_cochain(md, src_atlas, dst_atlas,
                                  split_dst.phi(degree, form));
    Cochain fx = split_src.phi(degree, pullback_form(md, form));
    out.lhs = fy - fx;
    out.rhs = eta(md, src_atlas, split_src, split_dst, degree, form)
                  .total_differential();
    out.pass = (out.lhs == out.rhs);
    return out;
}

} // namespace logfrob
