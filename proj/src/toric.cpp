#include "logfrob/toric.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include <Eigen/Dense>

#include "logfrob/error.hpp"

namespace logfrob {

namespace {

int64_t ipow_det(IMat m)
{
    // Bareiss would be overkill at these sizes; fraction-free elimination
    // on int64 is exact for the small determinants we meet.
    int n = static_cast<int>(m.rows());
    Eigen::Matrix<int64_t, Eigen::Dynamic, Eigen::Dynamic> a =
        m.cast<int64_t>();
    int64_t det = 1;
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (a(r, c) != 0) {
                piv = r;
                break;
            }
        if (piv < 0)
            return 0;
        if (piv != c) {
            a.row(piv).swap(a.row(c));
            det = -det;
        }
        for (int r = c + 1; r < n; ++r) {
            while (a(r, c) != 0) {
                int64_t q = a(r, c) / a(c, c);
                a.row(r) -= q * a.row(c);
                if (a(r, c) != 0)
                    a.row(r).swap(a.row(c)), det = -det;
            }
        }
        det *= a(c, c);
    }
    return det;
}

int64_t vec_gcd(const IVec& v)
{
    int64_t g = 0;
    for (int i = 0; i < v.size(); ++i)
        g = std::gcd(g, static_cast<int64_t>(std::abs(v(i))));
    return g;
}

IMat ray_matrix(const Fan& fan, const std::vector<int>& cone)
{
    IMat b(fan.n, static_cast<int>(cone.size()));
    for (size_t j = 0; j < cone.size(); ++j)
        b.col(static_cast<int>(j)) = fan.rays[cone[j]];
    return b;
}

// Inverse of a unimodular integer matrix (|det| = 1), exact.
IMat unimodular_inverse(const IMat& b)
{
    int n = static_cast<int>(b.rows());
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic> inv =
        b.cast<double>().inverse();
    IMat out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out(i, j) = static_cast<int>(std::llround(inv(i, j)));
    LF_ASSERT(((b * out) - IMat::Identity(n, n)).cwiseAbs().sum() == 0,
              "unimodular_inverse failed");
    return out;
}

int64_t pairing(const IVec& m, const IVec& rho)
{
    int64_t s = 0;
    for (int i = 0; i < m.size(); ++i)
        s += static_cast<int64_t>(m(i)) * rho(i);
    return s;
}

// Solve <x, rho_j> = rhs_j over the rays of a smooth max cone.
IVec cone_vertex(const Fan& fan, const std::vector<int>& cone,
                 const std::vector<int>& rhs)
{
    IMat b = ray_matrix(fan, cone); // columns are rays
    IMat binv = unimodular_inverse(b);
    // x^T b = rhs  =>  x = binv^T rhs
    IVec r(fan.n);
    for (int j = 0; j < fan.n; ++j)
        r(j) = rhs[j];
    return binv.transpose() * r;
}

} // namespace

bool DivisorSet::contains(int ray) const
{
    return std::binary_search(rays_in_divisor.begin(), rays_in_divisor.end(),
                              ray);
}

void check_fan_wellformed(const Fan& fan)
{
    LF_CHECK(fan.n >= 1, "SpecParseError", "fan rank must be >= 1");
    for (size_t i = 0; i < fan.rays.size(); ++i) {
        LF_CHECK(fan.rays[i].size() == fan.n, "SpecParseError",
                 "ray " + std::to_string(i) + " has wrong dimension");
        LF_CHECK(vec_gcd(fan.rays[i]) == 1, "SpecParseError",
                 "ray " + std::to_string(i) + " is not primitive");
    }
    for (size_t i = 0; i < fan.rays.size(); ++i)
        for (size_t j = i + 1; j < fan.rays.size(); ++j)
            LF_CHECK((fan.rays[i] - fan.rays[j]).cwiseAbs().sum() != 0,
                     "SpecParseError", "duplicate ray " + std::to_string(j));
    std::set<std::vector<int>> seen;
    for (const auto& cone : fan.max_cones) {
        LF_CHECK(!cone.empty(), "SpecParseError", "empty max cone");
        for (int r : cone)
            LF_CHECK(r >= 0 && r < static_cast<int>(fan.rays.size()),
                     "SpecParseError", "cone ray index out of range");
        LF_CHECK(std::is_sorted(cone.begin(), cone.end()) &&
                     std::adjacent_find(cone.begin(), cone.end()) ==
                         cone.end(),
                 "SpecParseError", "cone ray indices must be sorted, unique");
        LF_CHECK(seen.insert(cone).second, "SpecParseError",
                 "duplicate max cone");
    }
}

ValidityReport validate(const Fan& fan, int p)
{
    check_fan_wellformed(fan);
    ValidityReport rep;
    rep.n = fan.n;

    for (const auto& cone : fan.max_cones) {
        LF_CHECK(static_cast<int>(cone.size()) == fan.n, "NotSmooth",
                 "max cone does not have rank-many rays");
        int64_t det = ipow_det(ray_matrix(fan, cone));
        LF_CHECK(det == 1 || det == -1, "NotSmooth",
                 "max cone determinant " + std::to_string(det));
    }
    rep.smooth = true;

    if (fan.n == 1) {
        bool plus = false, minus = false;
        for (const auto& cone : fan.max_cones) {
            if (fan.rays[cone[0]](0) > 0)
                plus = true;
            else
                minus = true;
        }
        LF_CHECK(plus && minus && fan.max_cones.size() == 2, "NotComplete",
                 "rank-1 fan must consist of the two half-lines");
    } else {
        // Every facet (an (n-1)-subset of a max cone's rays) must be shared
        // by exactly two max cones, and the facet-adjacency graph must be
        // connected.
        std::map<std::vector<int>, std::vector<int>> facets;
        for (size_t c = 0; c < fan.max_cones.size(); ++c) {
            const auto& cone = fan.max_cones[c];
            for (int drop = 0; drop < fan.n; ++drop) {
                std::vector<int> f;
                for (int t = 0; t < fan.n; ++t)
                    if (t != drop)
                        f.push_back(cone[t]);
                facets[f].push_back(static_cast<int>(c));
            }
        }
        std::vector<std::vector<int>> adj(fan.max_cones.size());
        for (const auto& [f, cones] : facets) {
            LF_CHECK(cones.size() == 2, "NotComplete",
                     "facet shared by " + std::to_string(cones.size()) +
                         " max cones");
            adj[cones[0]].push_back(cones[1]);
            adj[cones[1]].push_back(cones[0]);
        }
        std::vector<bool> vis(fan.max_cones.size(), false);
        std::vector<int> stack{0};
        vis[0] = true;
        while (!stack.empty()) {
            int c = stack.back();
            stack.pop_back();
            for (int d : adj[c])
                if (!vis[d]) {
                    vis[d] = true;
                    stack.push_back(d);
                }
        }
        LF_CHECK(std::all_of(vis.begin(), vis.end(), [](bool b) { return b; }),
                 "NotComplete", "dual graph not connected");
    }
    rep.complete = true;
    rep.dim_less_p = fan.n < p;
    return rep;
}

bool is_ample(const Fan& fan, const Twist& twist)
{
    LF_ASSERT(twist.coeffs.size() == fan.rays.size(),
              "twist coefficient count mismatch");
    for (const auto& cone : fan.max_cones) {
        std::vector<int> rhs(fan.n);
        for (int j = 0; j < fan.n; ++j)
            rhs[j] = -twist.coeffs[cone[j]];
        IVec m = cone_vertex(fan, cone, rhs);
        for (size_t r = 0; r < fan.rays.size(); ++r) {
            if (std::find(cone.begin(), cone.end(), static_cast<int>(r)) !=
                cone.end())
                continue;
            if (pairing(m, fan.rays[r]) <= -twist.coeffs[r])
                return false; // support function not strictly convex
        }
    }
    return true;
}

IMat adapted_dual_basis(const Fan& fan, const std::vector<int>& cone)
{
    return unimodular_inverse(ray_matrix(fan, cone));
}

bool ChartContext::has_ray(int ray_id) const
{
    return std::binary_search(ray_ids.begin(), ray_ids.end(), ray_id);
}

ChartContext make_context(const Fan& fan, const std::vector<int>& ray_ids,
                          const DivisorSet& D, const Twist* twist)
{
    ChartContext ctx;
    ctx.n = fan.n;
    ctx.ray_ids = ray_ids;
    for (int r : ray_ids) {
        ctx.rays.push_back(fan.rays[r]);
        ctx.in_divisor.push_back(D.contains(r));
        ctx.shift.push_back(twist ? twist->coeffs[r] : 0);
    }
    return ctx;
}

namespace {

// Pairings <m, rho> + shift for each context ray; nullopt when some pairing
// is negative (the slice is then zero).
std::optional<std::vector<int64_t>> context_levels(const ChartContext& ctx,
                                                   const IVec& m)
{
    std::vector<int64_t> lv(ctx.rays.size());
    for (size_t j = 0; j < ctx.rays.size(); ++j) {
        lv[j] = pairing(m, ctx.rays[j]) + ctx.shift[j];
        if (lv[j] < 0)
            return std::nullopt;
    }
    return lv;
}

Subspace slice_with_divisor(const ChartContext& ctx, const IVec& m, int i,
                            bool use_divisor)
{
    int dim = binom(ctx.n, i);
    if (i < 0 || i > ctx.n)
        return Subspace::zero(std::max(dim, 0));
    auto lv = context_levels(ctx, m);
    if (!lv)
        return Subspace::zero(dim);
    Subspace v = Subspace::full(dim);
    for (size_t j = 0; j < ctx.rays.size(); ++j) {
        bool log_ok = use_divisor && ctx.in_divisor[j];
        if ((*lv)[j] == 0 && !log_ok) {
            if (i == 0)
                continue; // no wedge factor to constrain
            MatF c = contraction_by(ctx.rays[j], ctx.n, i);
            v = v.intersect(rank_kernel_image(c).kernel);
        }
    }
    return v;
}

} // namespace

Subspace form_space(const ChartContext& ctx, const IVec& m, int i)
{
    return slice_with_divisor(ctx, m, i, true);
}

Subspace form_space_nolog(const ChartContext& ctx, const IVec& m, int i)
{
    return slice_with_divisor(ctx, m, i, false);
}

Subspace weight_slice(const ChartContext& ctx, const IVec& m, int i, int l)
{
    int dim = binom(ctx.n, i);
    if (l < 0)
        return Subspace::zero(dim);
    Subspace v = form_space(ctx, m, i);
    l = std::min(l, i);
    if (l == i)
        return v;
    Subspace log1 = form_space(ctx, m, 1);        // subspace of Lambda^1
    Subspace reg1 = form_space_nolog(ctx, m, 1);
    // span of (wedge of l log-admissibles) ^ (wedge of i-l no-log ones)
    Subspace la = Subspace::span_cols(
        exterior_power(log1.basis().transpose(), l));
    Subspace rb = Subspace::span_cols(
        exterior_power(reg1.basis().transpose(), i - l));
    std::vector<RowF> rows;
    for (int a = 0; a < la.dim(); ++a) {
        for (int b = 0; b < rb.dim(); ++b) {
            // wedge the two multivectors through the mask algebra
            const auto& am = wedge_masks(ctx.n, l);
            const auto& bm = wedge_masks(ctx.n, i - l);
            RowF out = RowF::Zero(dim);
            for (size_t x = 0; x < am.size(); ++x) {
                Fp ca = la.basis()(a, static_cast<int>(x));
                if (ca.is_zero())
                    continue;
                for (size_t y = 0; y < bm.size(); ++y) {
                    Fp cb = rb.basis()(b, static_cast<int>(y));
                    if (cb.is_zero())
                        continue;
                    int sg = wedge_sign(am[x], bm[y]);
                    if (sg == 0)
                        continue;
                    out(wedge_index(ctx.n, am[x] | bm[y])) +=
                        Fp(sg) * ca * cb;
                }
            }
            rows.push_back(out);
        }
    }
    MatF rows_m(static_cast<int>(rows.size()), dim);
    for (size_t k = 0; k < rows.size(); ++k)
        rows_m.row(static_cast<int>(k)) = rows[k];
    return v.intersect(Subspace::span_rows(rows_m, dim));
}

Subspace hodge_slice(const ChartContext& ctx, const IVec& m, int i, int l)
{
    if (i >= l)
        return form_space(ctx, m, i);
    return Subspace::zero(binom(ctx.n, i));
}

namespace {

void polytope_box(const Fan& fan, const Twist* twist, IVec& lo, IVec& hi)
{
    lo = IVec::Zero(fan.n);
    hi = IVec::Zero(fan.n);
    for (const auto& cone : fan.max_cones) {
        std::vector<int> rhs(fan.n);
        for (int j = 0; j < fan.n; ++j)
            rhs[j] = twist ? -twist->coeffs[cone[j]] : 0;
        IVec v = cone_vertex(fan, cone, rhs);
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
}

void enumerate_box(const IVec& lo, const IVec& hi, std::vector<IVec>& out)
{
    int n = static_cast<int>(lo.size());
    IVec cur = lo;
    while (true) {
        out.push_back(cur);
        int k = n - 1;
        while (k >= 0 && cur(k) == hi(k)) {
            cur(k) = lo(k);
            --k;
        }
        if (k < 0)
            break;
        ++cur(k);
    }
}

} // namespace

std::vector<IVec> weight_support(const Fan& fan, const Twist* twist,
                                 int radius)
{
    IVec lo, hi;
    polytope_box(fan, twist, lo, hi);
    lo.array() -= radius;
    hi.array() += radius;
    std::vector<IVec> out;
    enumerate_box(lo, hi, out);
    // lex order: enumerate_box already walks the box in lex order
    return out;
}

std::vector<IVec> weight_shell(const Fan& fan, const Twist* twist, int radius)
{
    IVec lo, hi;
    polytope_box(fan, twist, lo, hi);
    IVec lo_in = lo, hi_in = hi;
    lo_in.array() -= radius;
    hi_in.array() += radius;
    lo.array() -= radius + 2;
    hi.array() += radius + 2;
    std::vector<IVec> big;
    enumerate_box(lo, hi, big);
    std::vector<IVec> out;
    for (const auto& m : big) {
        bool inside = true;
        for (int k = 0; k < m.size(); ++k)
            if (m(k) < lo_in(k) || m(k) > hi_in(k))
                inside = false;
        if (!inside)
            out.push_back(m);
    }
    return out;
}

int default_weight_radius(const Fan& fan, const Twist* twist)
{
    int amax = 0;
    if (twist)
        for (int a : twist->coeffs)
            amax = std::max(amax, std::abs(a));
    return 2 * (amax + fan.n + 1);
}

namespace {

// Coefficients of x in the ray basis of a smooth max cone; nullopt if x is
// not in the cone.
std::optional<IVec> cone_coords(const Fan& fan, const std::vector<int>& cone,
                                const IVec& x)
{
    IMat b = ray_matrix(fan, cone);
    IMat binv = unimodular_inverse(b);
    IVec c = binv * x;
    for (int j = 0; j < c.size(); ++j)
        if (c(j) < 0)
            return std::nullopt;
    return c;
}

} // namespace

std::vector<int> chart_assignment(const ToricMorphism& f)
{
    const Fan& src = f.source;
    const Fan& dst = f.target;
    LF_CHECK(f.lattice_map.rows() == dst.n && f.lattice_map.cols() == src.n,
             "SpecParseError", "lattice map has wrong shape");

    // divisor preimage condition: for every source ray not in D, the image
    // must avoid all E-rays.
    for (size_t r = 0; r < src.rays.size(); ++r) {
        IVec img = f.lattice_map * src.rays[r];
        bool found = false;
        for (const auto& cone : dst.max_cones) {
            auto c = cone_coords(dst, cone, img);
            if (!c)
                continue;
            found = true;
            if (!f.source_divisor.contains(static_cast<int>(r))) {
                for (int j = 0; j < c->size(); ++j) {
                    if ((*c)(j) > 0 &&
                        f.target_divisor.contains(cone[j]))
                        fail("NoChartAssignment",
                             "divisor preimage escapes the source divisor "
                             "at ray " +
                                 std::to_string(r));
                }
            }
            break;
        }
        LF_CHECK(found, "NoChartAssignment",
                 "image of ray " + std::to_string(r) +
                     " lies in no target cone");
    }

    std::vector<int> chi;
    for (const auto& cone : src.max_cones) {
        int found = -1;
        for (size_t t = 0; t < dst.max_cones.size() && found < 0; ++t) {
            bool all = true;
            for (int r : cone) {
                if (!cone_coords(dst, dst.max_cones[t],
                                 f.lattice_map * src.rays[r]))
                    all = false;
            }
            if (all)
                found = static_cast<int>(t);
        }
        LF_CHECK(found >= 0, "NoChartAssignment",
                 "no target chart contains the image of a source chart");
        chi.push_back(found);
    }
    return chi;
}

} // namespace logfrob
