#include "logfrob/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "logfrob/error.hpp"
#include "logfrob/flmod.hpp"

namespace logfrob {

namespace {

FormSum parse_poly(const Json& j, int n)
{
    FormSum out(n);
    LF_CHECK(j.is_array(), "SpecParseError",
             "polynomial must be an array of terms");
    for (const auto& term : j) {
        LF_CHECK(term.contains("m") && term.contains("c"), "SpecParseError",
                 "polynomial term needs keys m and c");
        Weight m;
        for (const auto& x : term.at("m"))
            m.push_back(x.get<int64_t>());
        LF_CHECK(static_cast<int>(m.size()) == n, "SpecParseError",
                 "term weight has wrong dimension");
        out.add_term(m, 0u, Fp(term.at("c").get<int64_t>()));
    }
    return out;
}

Json poly_to_json(const FormSum& f)
{
    Json terms = Json::array();
    for (const auto& [key, c] : f.terms()) {
        Json t;
        t["m"] = key.m;
        t["c"] = c.value();
        terms.push_back(t);
    }
    return terms;
}

Fan parse_fan(const Json& j)
{
    Fan fan;
    LF_CHECK(j.contains("rays") && j.contains("max_cones"), "SpecParseError",
             "fan needs rays and max_cones");
    const auto& rays = j.at("rays");
    LF_CHECK(rays.is_array() && !rays.empty(), "SpecParseError",
             "fan.rays must be a nonempty array");
    fan.n = static_cast<int>(rays.at(0).size());
    for (const auto& r : rays) {
        IVec v(fan.n);
        LF_CHECK(static_cast<int>(r.size()) == fan.n, "SpecParseError",
                 "ray dimension mismatch");
        for (int i = 0; i < fan.n; ++i)
            v(i) = r.at(i).get<int>();
        fan.rays.push_back(v);
    }
    for (const auto& c : j.at("max_cones")) {
        std::vector<int> cone;
        for (const auto& x : c)
            cone.push_back(x.get<int>());
        std::sort(cone.begin(), cone.end());
        fan.max_cones.push_back(cone);
    }
    check_fan_wellformed(fan);
    return fan;
}

std::map<int, std::map<int, FormSum>> parse_lift(const Json& j,
                                                 const Fan& fan)
{
    std::map<int, std::map<int, FormSum>> out;
    LF_CHECK(j.is_array(), "SpecParseError", "lift must be an array");
    for (const auto& entry : j) {
        int cone = entry.at("cone").get<int>();
        LF_CHECK(cone >= 0 &&
                     cone < static_cast<int>(fan.max_cones.size()),
                 "SpecParseError", "lift cone index out of range");
        for (const auto& pert : entry.at("perturbations")) {
            int ray = pert.at("ray").get<int>();
            const auto& cr = fan.max_cones[cone];
            auto it = std::find(cr.begin(), cr.end(), ray);
            LF_CHECK(it != cr.end(), "SpecParseError",
                     "lift ray " + std::to_string(ray) +
                         " is not a ray of cone " + std::to_string(cone));
            int local = static_cast<int>(it - cr.begin());
            out[cone][local] = parse_poly(pert.at("terms"), fan.n);
        }
    }
    return out;
}

} // namespace

VarietySpec parse_spec(const Json& j)
{
    VarietySpec spec;
    LF_CHECK(j.contains("p") && j.contains("fan"), "SpecParseError",
             "spec needs p and fan");
    spec.p = j.at("p").get<int>();
    LF_CHECK(spec.p >= 2, "SpecParseError", "p must be at least 2");
    spec.fan = parse_fan(j.at("fan"));
    if (j.contains("divisor_rays")) {
        for (const auto& x : j.at("divisor_rays")) {
            int r = x.get<int>();
            LF_CHECK(r >= 0 && r < static_cast<int>(spec.fan.rays.size()),
                     "SpecParseError", "divisor ray index out of range");
            spec.divisor.rays_in_divisor.push_back(r);
        }
        std::sort(spec.divisor.rays_in_divisor.begin(),
                  spec.divisor.rays_in_divisor.end());
        auto& v = spec.divisor.rays_in_divisor;
        LF_CHECK(std::adjacent_find(v.begin(), v.end()) == v.end(),
                 "SpecParseError", "duplicate divisor ray");
    }
    if (j.contains("twist") && !j.at("twist").is_null()) {
        Twist tw;
        for (const auto& x : j.at("twist"))
            tw.coeffs.push_back(x.get<int>());
        LF_CHECK(tw.coeffs.size() == spec.fan.rays.size(), "SpecParseError",
                 "twist needs one coefficient per ray");
        spec.twist = tw;
    }
    if (j.contains("lift") && !j.at("lift").is_null())
        spec.lift = parse_lift(j.at("lift"), spec.fan);
    if (j.contains("morphism") && !j.at("morphism").is_null()) {
        const Json& m = j.at("morphism");
        MorphismSpec ms;
        ms.target_fan = parse_fan(m.at("target").at("fan"));
        if (m.at("target").contains("divisor_rays"))
            for (const auto& x : m.at("target").at("divisor_rays"))
                ms.target_divisor.rays_in_divisor.push_back(x.get<int>());
        std::sort(ms.target_divisor.rays_in_divisor.begin(),
                  ms.target_divisor.rays_in_divisor.end());
        const auto& lm = m.at("lattice_map");
        int rows = static_cast<int>(lm.size());
        int cols = static_cast<int>(lm.at(0).size());
        LF_CHECK(rows == ms.target_fan.n && cols == spec.fan.n,
                 "SpecParseError", "lattice map shape mismatch");
        ms.lattice_map = IMat(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                ms.lattice_map(r, c) = lm.at(r).at(c).get<int>();
        if (m.at("target").contains("lift"))
            ms.target_lift =
                parse_lift(m.at("target").at("lift"), ms.target_fan);
        spec.morphism = ms;
    }
    if (j.contains("weight_radius") && !j.at("weight_radius").is_null())
        spec.weight_radius = j.at("weight_radius").get<int>();
    if (j.contains("checks"))
        for (const auto& c : j.at("checks"))
            spec.checks.push_back(c.get<std::string>());
    if (j.contains("seed"))
        spec.seed = j.at("seed").get<uint64_t>();
    return spec;
}

Json spec_to_json(const VarietySpec& spec)
{
    Json j;
    j["p"] = spec.p;
    Json rays = Json::array();
    for (const auto& r : spec.fan.rays) {
        Json row = Json::array();
        for (int i = 0; i < r.size(); ++i)
            row.push_back(r(i));
        rays.push_back(row);
    }
    j["fan"]["rays"] = rays;
    j["fan"]["max_cones"] = spec.fan.max_cones;
    j["divisor_rays"] = spec.divisor.rays_in_divisor;
    if (spec.twist)
        j["twist"] = spec.twist->coeffs;
    if (!spec.lift.empty()) {
        Json lifts = Json::array();
        for (const auto& [cone, perts] : spec.lift) {
            Json entry;
            entry["cone"] = cone;
            Json ps = Json::array();
            for (const auto& [local, poly] : perts) {
                Json p;
                p["ray"] = spec.fan.max_cones[cone][local];
                p["terms"] = poly_to_json(poly);
                ps.push_back(p);
            }
            entry["perturbations"] = ps;
            lifts.push_back(entry);
        }
        j["lift"] = lifts;
    }
    if (spec.morphism) {
        Json m;
        Json lm = Json::array();
        for (int r = 0; r < spec.morphism->lattice_map.rows(); ++r) {
            Json row = Json::array();
            for (int c = 0; c < spec.morphism->lattice_map.cols(); ++c)
                row.push_back(spec.morphism->lattice_map(r, c));
            lm.push_back(row);
        }
        m["lattice_map"] = lm;
        Json trays = Json::array();
        for (const auto& r : spec.morphism->target_fan.rays) {
            Json row = Json::array();
            for (int i = 0; i < r.size(); ++i)
                row.push_back(r(i));
            trays.push_back(row);
        }
        m["target"]["fan"]["rays"] = trays;
        m["target"]["fan"]["max_cones"] =
            spec.morphism->target_fan.max_cones;
        m["target"]["divisor_rays"] =
            spec.morphism->target_divisor.rays_in_divisor;
        j["morphism"] = m;
    }
    if (spec.weight_radius >= 0)
        j["weight_radius"] = spec.weight_radius;
    if (!spec.checks.empty())
        j["checks"] = spec.checks;
    j["seed"] = spec.seed;
    return j;
}

uint64_t Rng::next()
{
    // xorshift64*, fixed across platforms
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545f4914f6cdd1dull;
}

int Rng::below(int n)
{
    return n <= 1 ? 0 : static_cast<int>(next() % static_cast<uint64_t>(n));
}

FrobLift random_lift(const Atlas& atlas, Rng& rng, int max_degree,
                     int max_terms)
{
    FrobLift lift;
    lift.charts.resize(atlas.num_charts());
    int p = atlas.p;
    for (int c = 0; c < atlas.num_charts(); ++c) {
        const auto& cone = atlas.fan.max_cones[c];
        IMat dual = adapted_dual_basis(atlas.fan, cone);
        int n = atlas.fan.n;
        for (size_t t = 0; t < cone.size(); ++t) {
            int terms = rng.below(max_terms + 1);
            FormSum poly(n);
            for (int x = 0; x < terms; ++x) {
                IVec m = IVec::Zero(n);
                for (int u = 0; u < n; ++u)
                    m += rng.below(max_degree + 1) *
                         IVec(dual.row(u).transpose());
                int coef = 1 + rng.below(p - 1);
                poly =
                    poly + FormSum::monomial(n, to_weight(m), 0u, Fp(coef));
            }
            if (!poly.is_zero())
                lift.charts[c][static_cast<int>(t)] = poly;
        }
    }
    return lift;
}

std::vector<int> hodge_column(Session& session, int i)
{
    return session.sheaf_h_dims(i, std::nullopt);
}

// ---- the weight-zero MFLC model ---------------------------------------------

MFLComplex build_global_mflc(Session& session, const SplitData& split)
{
    const Atlas& atlas = session.atlas();
    int n = atlas.fan.n;
    session.warm_up();
    IVec zero = IVec::Zero(n);

    // every other support weight must be exact already on the graded level
    for (const auto& m : session.support()) {
        bool is_zero_w = true;
        for (int t = 0; t < m.size(); ++t)
            if (m(t) != 0)
                is_zero_w = false;
        if (is_zero_w)
            continue;
        for (int l = 0; l <= n; ++l) {
            ComplexOptions opts;
            opts.gr_level = l;
            SolvedComplex g =
                solve_complex(build_weight_complex(atlas, m, opts));
            for (int k = 0; k <= g.C.kmax; ++k)
                LF_CHECK(g.h_dim(k) == 0, "AxiomViolation",
                         "nonzero weight carries graded cohomology; the "
                         "weight-zero model is not faithful");
        }
    }

    const SolvedComplex& s0 = session.weight(zero);
    MFLComplex m;
    m.dR.deg_lo = 0;
    m.dR.dims = s0.C.dims;
    m.dR.d = s0.C.d_total;
    m.dR.w_lo = 0;
    m.dR.w_hi = n;
    m.dR.f_lo = 0;
    m.dR.f_hi = n;
    for (int k = 0; k <= s0.C.kmax; ++k) {
        auto wsteps = w_flag_steps(atlas, s0.C, k);
        std::vector<Subspace> w(wsteps.begin() + 1, wsteps.end());
        m.dR.W.push_back(w);
        auto fsteps = fil_flag_steps(atlas, s0.C, k);
        fsteps.pop_back();
        m.dR.Fil.push_back(fsteps);
    }
    m.hig = m.dR;
    m.hig.d = s0.C.d_cech;

    for (int k = 0; k <= s0.C.kmax; ++k) {
        MatF psi = MatF::Zero(s0.C.dims[k], s0.C.dims[k]);
        for (int b = 0; b < s0.C.dims[k]; ++b) {
            VecF unit = VecF::Zero(s0.C.dims[k]);
            unit(b) = Fp(1);
            Cochain higgs = extract_cochain(s0.C, atlas, unit, k);
            Cochain image = split.phi_on_cochain(higgs);
            psi.col(b) = embed_cochain(s0.C, atlas, image, zero, k);
        }
        m.psi.push_back(psi);
    }
    return m;
}

// ---- individual checks -------------------------------------------------------

namespace {

Json dims_json(const std::vector<int>& v)
{
    return Json(v);
}

Json matrix_json(const MatF& m)
{
    Json rows = Json::array();
    for (int r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < m.cols(); ++c)
            row.push_back(m(r, c).value());
        rows.push_back(row);
    }
    return rows;
}

struct CheckContext {
    const VarietySpec& spec;
    Atlas& atlas;
    Session& session;
    SplitData& split;
    int radius;
};

bool weight_is_zero(const IVec& m)
{
    for (int i = 0; i < m.size(); ++i)
        if (m(i) != 0)
            return false;
    return true;
}

Json check_shell_audit(CheckContext& ctx)
{
    Json out;
    ctx.session.shell_audit();
    out["pass"] = true;
    out["radius"] = ctx.radius;
    out["support_size"] = ctx.session.support().size();
    return out;
}

Json check_cohomology(CheckContext& ctx)
{
    Json out;
    int n = ctx.atlas.fan.n;
    std::vector<int> h = ctx.session.total_h_dims();
    out["h_dims"] = dims_json(h);
    Json diamond = Json::array();
    for (int i = 0; i <= n; ++i)
        diamond.push_back(dims_json(hodge_column(ctx.session, i)));
    out["hodge_diamond"] = diamond;
    Json wdims = Json::array();
    for (int l = 0; l <= n; ++l)
        wdims.push_back(dims_json(ctx.session.subcomplex_h_dims(l)));
    out["w_filtered_dims"] = wdims;

    bool euler = true;
    for (const auto& m : ctx.session.support()) {
        const SolvedComplex& sc = ctx.session.weight(m);
        int chd = 0, chh = 0;
        for (int k = 0; k <= sc.C.kmax; ++k) {
            int sg = (k % 2 == 0) ? 1 : -1;
            chd += sg * sc.C.dims[k];
            chh += sg * sc.h_dim(k);
        }
        if (chd != chh)
            euler = false;
    }
    out["euler_audit"] = euler;
    out["pass"] = euler;
    return out;
}

Json check_decomposition(CheckContext& ctx)
{
    Json out;
    int n = ctx.atlas.fan.n;
    if (!ctx.atlas.validity.dim_less_p) {
        out["skipped"] = "dim(X) >= p, the decomposition hypothesis fails";
        return out;
    }
    bool pass = true;
    std::vector<int> h = ctx.session.total_h_dims();
    std::vector<std::vector<int>> columns;
    for (int i = 0; i <= n; ++i)
        columns.push_back(hodge_column(ctx.session, i));
    Json table = Json::array();
    for (size_t k = 0; k < h.size(); ++k) {
        int higgs = 0;
        for (int i = 0; i <= n; ++i) {
            int r = static_cast<int>(k) - i;
            if (r >= 0 && r < static_cast<int>(columns[i].size()))
                higgs += columns[i][r];
        }
        Json row;
        row["m"] = k;
        row["dr"] = h[k];
        row["higgs"] = higgs;
        table.push_back(row);
        if (h[k] != higgs)
            pass = false;
    }
    out["dimension_table"] = table;

    Json wtable = Json::array();
    for (int l = 0; l <= n; ++l) {
        std::vector<int> dr = ctx.session.subcomplex_h_dims(l);
        Json row;
        row["l"] = l;
        row["dr"] = dims_json(dr);
        std::vector<int> higgs(dr.size(), 0);
        for (int i = 0; i <= n; ++i) {
            std::vector<int> col = ctx.session.sheaf_h_dims(i, l);
            for (size_t r = 0; r < col.size(); ++r)
                if (r + i < higgs.size())
                    higgs[r + i] += col[r];
        }
        row["higgs"] = dims_json(higgs);
        for (size_t k = 0; k < dr.size(); ++k)
            if (dr[k] != higgs[k])
                pass = false;
        wtable.push_back(row);
    }
    out["w_filtered_table"] = wtable;

    Json psis = Json::array();
    bool w_compat = true;
    for (int mdeg = 0; mdeg <= 2 * n; ++mdeg) {
        if (static_cast<size_t>(mdeg) >= h.size() || h[mdeg] == 0)
            continue;
        PsiMatrix psi = psi_on_cohomology(ctx.session, ctx.split, mdeg);
        Json entry;
        entry["mdeg"] = mdeg;
        entry["matrix"] = matrix_json(psi.matrix);
        psis.push_back(entry);
        for (int l = 0; l <= n; ++l) {
            for (int i = 0; i <= std::min(n, mdeg); ++i) {
                int r = mdeg - i;
                for (const auto& m : ctx.session.support()) {
                    SolvedComplex wl = solve_complex(
                        build_sheaf_complex(ctx.atlas, m, i, l));
                    if (r < 0 || r > wl.C.kmax || wl.h_dim(r) == 0)
                        continue;
                    for (int b = 0; b < wl.h_dim(r); ++b) {
                        Cochain c = extract_cochain(
                            wl.C, ctx.atlas,
                            wl.H[r].reps().row(b).transpose(), r);
                        Cochain img = ctx.split.phi_on_cochain(c);
                        auto classes = ctx.session.class_of(img, mdeg);
                        for (const auto& [wm, coords] : classes) {
                            bool nz = false;
                            for (int x = 0; x < coords.size(); ++x)
                                if (!coords(x).is_zero())
                                    nz = true;
                            if (!nz)
                                continue;
                            Subspace wsub = ctx.session.h_w_filtered(
                                to_ivec(wm), mdeg, l);
                            if (!wsub.contains(coords))
                                w_compat = false;
                        }
                    }
                }
            }
        }
    }
    out["psi"] = psis;
    out["psi_w_compatible"] = w_compat;
    pass = pass && w_compat;
    out["pass"] = pass;
    return out;
}

Json check_cartier(CheckContext& ctx)
{
    Json out;
    if (!ctx.atlas.validity.dim_less_p) {
        out["skipped"] = "dim(X) >= p";
        return out;
    }
    int n = ctx.atlas.fan.n;
    int p = ctx.atlas.p;
    bool pass = true;
    int checked = 0;
    for (const auto& m : ctx.session.support()) {
        const SolvedComplex& sc = ctx.session.weight(m);
        bool divisible = true;
        IVec q(n);
        for (int i = 0; i < n; ++i) {
            if (m(i) % p != 0)
                divisible = false;
            else
                q(i) = m(i) / p;
        }
        for (int k = 0; k <= sc.C.kmax; ++k) {
            int dr = sc.h_dim(k);
            int higgs = 0;
            if (divisible) {
                for (int i = 0; i <= std::min(n, k); ++i) {
                    SolvedComplex sheaf = solve_complex(
                        build_sheaf_complex(ctx.atlas, q, i, std::nullopt));
                    int r = k - i;
                    if (r >= 0 && r <= sheaf.C.kmax)
                        higgs += sheaf.h_dim(r);
                }
            }
            if (dr != higgs)
                pass = false;
            ++checked;
        }
    }
    out["weights_checked"] = checked;
    out["pass"] = pass;
    return out;
}

Json check_truncation(CheckContext& ctx)
{
    Json out;
    int n = ctx.atlas.fan.n;
    bool pass = true;
    int count = 0;
    Json zero_block;
    for (const auto& m : ctx.session.support()) {
        for (int l = 0; l <= n; ++l) {
            MuCheckResult res = truncation_mu_check(ctx.atlas, m, l);
            if (!res.pass)
                pass = false;
            ++count;
            if (weight_is_zero(m) && l == 1 && zero_block.is_null()) {
                zero_block["lhs"] = dims_json(res.lhs_dims);
                zero_block["rhs"] = dims_json(res.rhs_dims);
            }
        }
    }
    out["cases"] = count;
    if (!zero_block.is_null())
        out["weight_zero_sample"] = zero_block;
    out["pass"] = pass;
    return out;
}

Json check_residue(CheckContext& ctx)
{
    Json out;
    int n = ctx.atlas.fan.n;
    bool pass = true;
    int certified = 0;
    for (const auto& tuple : ctx.atlas.tuples) {
        ChartContext cc = tuple.ctx;
        std::fill(cc.shift.begin(), cc.shift.end(), 0);
        for (const auto& m : ctx.session.support()) {
            for (int i = 0; i <= n; ++i) {
                for (int l = 0; l <= i; ++l) {
                    GrDecomposition g;
                    try {
                        g = gr_weight_decompose(cc, m, i, l);
                    } catch (const Error& e) {
                        pass = false;
                        out["failure"] = e.what();
                        continue;
                    }
                    ++certified;
                    if (l == 0)
                        continue;
                    Subspace lower = weight_slice(cc, m, i, l - 1);
                    for (const auto& stratum : g.strata) {
                        for (int b = 0; b < lower.dim(); ++b) {
                            FormSum f = from_wedge_vector(
                                lower.basis().row(b).transpose(),
                                to_weight(m), n, i);
                            for (int rid : stratum) {
                                auto it = std::find(cc.ray_ids.begin(),
                                                    cc.ray_ids.end(), rid);
                                f = f.contract(
                                    cc.rays[it - cc.ray_ids.begin()]);
                            }
                            if (!f.is_zero())
                                pass = false;
                        }
                    }
                }
            }
        }
    }
    out["slices_certified"] = certified;
    out["pass"] = pass;
    return out;
}

Json check_splitting_laws(CheckContext& ctx, int lift_count)
{
    Json out;
    const Atlas& atlas = ctx.atlas;
    int n = atlas.fan.n;
    int p = atlas.p;
    Rng rng(ctx.spec.seed + 1);
    bool pass = true;
    int laws_checked = 0;

    std::vector<IVec> box = weight_support(atlas.fan, nullptr, 1);

    for (int trial = 0; trial < lift_count; ++trial) {
        FrobLift lift = random_lift(atlas, rng, 3, 2);
        SplitData split(atlas, lift);
        for (const auto& m : box) {
            for (int j = 0; j < n; ++j) {
                FormSum gen =
                    FormSum::monomial(n, to_weight(m), 1u << j, Fp(1));
                for (int a = 0; a < atlas.num_charts(); ++a) {
                    if (!split.zeta(a, gen).d().is_zero())
                        pass = false;
                    for (int b = a + 1; b < atlas.num_charts(); ++b) {
                        FormSum lhs = split.h(a, b, gen).d();
                        FormSum rhs =
                            split.zeta(b, gen) - split.zeta(a, gen);
                        if (!(lhs == rhs))
                            pass = false;
                        for (int c = b + 1; c < atlas.num_charts(); ++c) {
                            FormSum coc = split.h(a, b, gen) +
                                          split.h(b, c, gen) -
                                          split.h(a, c, gen);
                            if (!coc.is_zero())
                                pass = false;
                        }
                    }
                }
                ++laws_checked;
            }
        }
        for (int i = 1; i < std::min(n + 1, p); ++i) {
            for (const auto& m : box) {
                Subspace global = Subspace::full(binom(n, i));
                for (const auto& cc : atlas.charts)
                    global = global.intersect(form_space(cc, m, i));
                for (int b = 0; b < global.dim(); ++b) {
                    FormSum f = from_wedge_vector(
                        global.basis().row(b).transpose(), to_weight(m),
                        n, i);
                    if (!split.phi(i, f).total_differential().is_zero())
                        pass = false;
                    ++laws_checked;
                }
                for (int l = 0; l <= i; ++l) {
                    Subspace wg = Subspace::full(binom(n, i));
                    for (const auto& cc : atlas.charts)
                        wg = wg.intersect(weight_slice(cc, m, i, l));
                    for (int b = 0; b < wg.dim(); ++b) {
                        FormSum f = from_wedge_vector(
                            wg.basis().row(b).transpose(), to_weight(m),
                            n, i);
                        Cochain img = split.phi(i, f);
                        for (const auto& [key, val] : img.entries()) {
                            const ChartContext& cc =
                                atlas.tuples[key.first].ctx;
                            for (const auto& wm : val.weights()) {
                                VecF v = wedge_vector(val, wm, n,
                                                      key.second);
                                Subspace wl = weight_slice(
                                    cc, to_ivec(wm), key.second, l);
                                if (!wl.contains(v))
                                    pass = false;
                            }
                        }
                        ++laws_checked;
                    }
                }
            }
        }
    }
    out["lifts"] = lift_count;
    out["laws_checked"] = laws_checked;
    out["pass"] = pass;
    return out;
}

Json check_lifting_independence(CheckContext& ctx, int lift_count)
{
    Json out;
    if (!ctx.atlas.validity.dim_less_p) {
        out["skipped"] = "dim(X) >= p";
        return out;
    }
    int n = ctx.atlas.fan.n;
    Rng rng(ctx.spec.seed + 2);
    bool pass = true;
    std::vector<MatF> reference;
    int trials = std::max(lift_count, 3);
    std::vector<int> h = ctx.session.total_h_dims();
    for (int trial = 0; trial < trials; ++trial) {
        FrobLift lift = trial == 0 ? FrobLift::canonical(ctx.atlas)
                                   : random_lift(ctx.atlas, rng, 3, 2);
        SplitData split(ctx.atlas, lift);
        std::vector<MatF> mats;
        for (int mdeg = 0; mdeg <= 2 * n; ++mdeg) {
            if (static_cast<size_t>(mdeg) >= h.size() || h[mdeg] == 0)
                continue;
            mats.push_back(
                psi_on_cohomology(ctx.session, split, mdeg).matrix);
        }
        if (trial == 0) {
            reference = mats;
            Json ref = Json::array();
            for (const auto& m : mats)
                ref.push_back(matrix_json(m));
            out["psi_matrices"] = ref;
        } else {
            if (mats.size() != reference.size())
                pass = false;
            else
                for (size_t x = 0; x < mats.size(); ++x)
                    if (!mat_equal(mats[x], reference[x]))
                        pass = false;
        }
    }
    out["lifts"] = trials;
    out["pass"] = pass;
    return out;
}

Json check_homotopy(CheckContext& ctx)
{
    Json out;
    const Atlas& atlas = ctx.atlas;
    int n = atlas.fan.n;
    int p = atlas.p;
    Rng rng(ctx.spec.seed + 3);
    bool pass = true;
    int cases = 0;
    bool eta_nonzero = false;

    MorphismData md = identity_morphism(atlas.fan, atlas.divisor);
    FrobLift spec_lift;
    spec_lift.charts.resize(atlas.num_charts());
    for (const auto& [c, ps] : ctx.spec.lift)
        spec_lift.charts[c] = ps;

    std::vector<std::pair<FrobLift, FrobLift>> pairs;
    pairs.emplace_back(FrobLift::canonical(atlas),
                       ctx.spec.lift.empty() ? random_lift(atlas, rng, 3, 2)
                                             : spec_lift);
    pairs.emplace_back(random_lift(atlas, rng, 2, 2),
                       random_lift(atlas, rng, 2, 2));

    std::vector<IVec> box = weight_support(atlas.fan, nullptr, 1);
    for (const auto& [la, lb] : pairs) {
        SplitData sa(atlas, la), sb(atlas, lb);
        for (int i = 0; i < std::min(p, n + 1); ++i) {
            const auto& masks = wedge_masks(n, i);
            for (const auto& m : box) {
                for (uint32_t mask : masks) {
                    FormSum f =
                        FormSum::monomial(n, to_weight(m), mask, Fp(1));
                    auto chk =
                        homotopy_check(md, atlas, atlas, sa, sb, i, f);
                    if (!chk.pass)
                        pass = false;
                    if (!chk.rhs.is_zero())
                        eta_nonzero = true;
                    ++cases;
                }
            }
        }
    }
    out["cases"] = cases;
    out["eta_nonzero_seen"] = eta_nonzero;
    out["pass"] = pass;
    return out;
}

Json check_functoriality(CheckContext& ctx)
{
    Json out;
    if (!ctx.spec.morphism) {
        out["skipped"] = "no morphism in the spec";
        return out;
    }
    const MorphismSpec& ms = *ctx.spec.morphism;
    ToricMorphism mor;
    mor.lattice_map = ms.lattice_map;
    mor.source = ctx.spec.fan;
    mor.target = ms.target_fan;
    mor.source_divisor = ctx.spec.divisor;
    mor.target_divisor = ms.target_divisor;
    MorphismData md = make_morphism_data(mor);

    Atlas dst_atlas = make_atlas(ms.target_fan, ms.target_divisor,
                                 std::nullopt, ctx.spec.p);
    Session dst_session(dst_atlas,
                        default_weight_radius(ms.target_fan, nullptr),
                        ctx.session.threads());
    FrobLift dst_lift;
    dst_lift.charts.resize(dst_atlas.num_charts());
    for (const auto& [c, ps] : ms.target_lift)
        dst_lift.charts[c] = ps;
    SplitData dst_split(dst_atlas, dst_lift);

    int ny = ms.target_fan.n;
    int p = ctx.spec.p;
    bool pass = true;
    bool eta_nonzero = false;
    int cases = 0;

    std::vector<IVec> box = weight_support(ms.target_fan, nullptr, 1);
    for (int i = 0; i < std::min(p, ny + 1); ++i) {
        const auto& masks = wedge_masks(ny, i);
        for (const auto& m : box) {
            for (uint32_t mask : masks) {
                FormSum f =
                    FormSum::monomial(ny, to_weight(m), mask, Fp(1));
                auto chk = homotopy_check(md, ctx.atlas, dst_atlas,
                                          ctx.split, dst_split, i, f);
                if (!chk.pass)
                    pass = false;
                if (!chk.rhs.is_zero())
                    eta_nonzero = true;
                ++cases;
            }
        }
    }
    out["eta_cases"] = cases;
    out["eta_nonzero_seen"] = eta_nonzero;

    bool intertwined = true;
    if (ctx.atlas.validity.dim_less_p) {
        std::vector<int> hy = dst_session.total_h_dims();
        for (int mdeg = 0; mdeg <= 2 * ny; ++mdeg) {
            if (static_cast<size_t>(mdeg) >= hy.size() || hy[mdeg] == 0)
                continue;
            PsiMatrix psiy =
                psi_on_cohomology(dst_session, dst_split, mdeg);
            PsiMatrix psix =
                psi_on_cohomology(ctx.session, ctx.split, mdeg);
            auto pull_dr = [&](const PsiMatrix::RowLabel& lbl) {
                const SolvedComplex& sc =
                    dst_session.weight(to_ivec(lbl.m));
                Cochain rep = extract_cochain(
                    sc.C, dst_atlas,
                    sc.H[mdeg].reps().row(lbl.idx).transpose(), mdeg);
                Cochain pulled =
                    pullback_cochain(md, ctx.atlas, dst_atlas, rep);
                auto cls = ctx.session.class_of(pulled, mdeg);
                VecF v = VecF::Zero(static_cast<int>(psix.rows.size()));
                for (size_t r = 0; r < psix.rows.size(); ++r) {
                    auto it = cls.find(psix.rows[r].m);
                    if (it != cls.end())
                        v(static_cast<int>(r)) =
                            it->second(psix.rows[r].idx);
                }
                return v;
            };
            auto pull_higgs = [&](const PsiMatrix::ColLabel& lbl) {
                SolvedComplex sheaf = solve_complex(build_sheaf_complex(
                    dst_atlas, to_ivec(lbl.m), lbl.i, std::nullopt));
                int r = mdeg - lbl.i;
                Cochain rep = extract_cochain(
                    sheaf.C, dst_atlas,
                    sheaf.H[r].reps().row(lbl.idx).transpose(), r);
                Cochain pulled =
                    pullback_cochain(md, ctx.atlas, dst_atlas, rep);
                VecF v = VecF::Zero(static_cast<int>(psix.cols.size()));
                for (size_t c = 0; c < psix.cols.size(); ++c) {
                    if (psix.cols[c].i != lbl.i)
                        continue;
                    SolvedComplex xs = solve_complex(build_sheaf_complex(
                        ctx.atlas, to_ivec(psix.cols[c].m), lbl.i,
                        std::nullopt));
                    if (r < 0 || r > xs.C.kmax)
                        continue;
                    VecF coords = embed_cochain(xs.C, ctx.atlas, pulled,
                                                to_ivec(psix.cols[c].m),
                                                r);
                    VecF cls = xs.H[r].project(coords);
                    v(static_cast<int>(c)) = cls(psix.cols[c].idx);
                }
                return v;
            };
            for (size_t c = 0; c < psiy.cols.size(); ++c) {
                VecF left =
                    VecF::Zero(static_cast<int>(psix.rows.size()));
                for (size_t r = 0; r < psiy.rows.size(); ++r) {
                    Fp coef = psiy.matrix(static_cast<int>(r),
                                          static_cast<int>(c));
                    if (coef.is_zero())
                        continue;
                    VecF pulled = pull_dr(psiy.rows[r]);
                    for (int x = 0; x < left.size(); ++x)
                        left(x) += coef * pulled(x);
                }
                VecF hcoords = pull_higgs(psiy.cols[c]);
                VecF right = psix.matrix * hcoords;
                for (int x = 0; x < left.size(); ++x)
                    if (left(x) != right(x))
                        intertwined = false;
            }
        }
    }
    out["psi_intertwined"] = intertwined;
    pass = pass && intertwined;
    out["pass"] = pass;
    return out;
}

Json fl_module_json(const FLModule& m)
{
    Json out;
    out["dim"] = m.dim;
    out["gr_dims"] = dims_json(m.gr_dims);
    out["psi"] = matrix_json(m.psi);
    out["valid"] = fl_validate(m);
    return out;
}

Json check_weight_ss(CheckContext& ctx)
{
    Json out;
    if (!ctx.atlas.validity.dim_less_p) {
        out["skipped"] = "dim(X) >= p, no Fontaine-Laffaille structure";
        return out;
    }
    MFLComplex m = build_global_mflc(ctx.session, ctx.split);
    MFLPages pages = mfl_pages(m);
    out["degeneration_radius"] = pages.degeneration_radius;

    Json page_dims = Json::array();
    for (const auto& page : pages.dr.pages()) {
        if (page.r < 1)
            continue;
        Json pj;
        pj["r"] = page.r;
        Json spots = Json::array();
        for (const auto& [key, s] : page.spots) {
            if (s.E.dim() == 0)
                continue;
            Json sp;
            sp["i"] = key.first;
            sp["j"] = key.second;
            sp["dim"] = s.E.dim();
            sp["d_rank"] = rank_of(s.d);
            spots.push_back(sp);
        }
        pj["spots"] = spots;
        page_dims.push_back(pj);
    }
    out["pages"] = page_dims;
    out["theorem_identities"] = pages.all_pass;

    bool flmod_ok = true;
    int morphisms = 0;
    for (const auto& row : pages.spots) {
        for (const auto& spot : row) {
            if (spot.module.dim == 0)
                continue;
            const MFLSpot* target = nullptr;
            for (const auto& other : row)
                if (other.i == spot.i + spot.r &&
                    other.j == spot.j - spot.r + 1)
                    target = &other;
            const Page* pd = nullptr;
            for (const auto& page : pages.dr.pages())
                if (page.r == spot.r)
                    pd = &page;
            const PageSpot* ps = pd->spot(spot.i, spot.j);
            if (!target || target->module.dim == 0) {
                if (!is_zero(ps->d))
                    flmod_ok = false;
                continue;
            }
            try {
                auto [ker, coker] =
                    kernel_cokernel(ps->d, spot.module, target->module);
                if (!fl_validate(ker) || !fl_validate(coker))
                    flmod_ok = false;
                ++morphisms;
            } catch (const Error&) {
                flmod_ok = false;
            }
        }
    }
    out["fl_morphisms_checked"] = morphisms;
    out["fl_kernels_cokernels_valid"] = flmod_ok;

    Json hmods = Json::array();
    bool hmods_ok = true;
    std::vector<int> h = m.dR.h_dims();
    for (size_t k = 0; k < h.size(); ++k) {
        if (h[k] == 0)
            continue;
        FLModule fm = fl_structure_on_h(m, static_cast<int>(k));
        Json e;
        e["mdeg"] = k;
        e["module"] = fl_module_json(fm);
        if (!fl_validate(fm))
            hmods_ok = false;
        hmods.push_back(e);
    }
    out["h_modules"] = hmods;

    bool conv = true;
    for (size_t k = 0; k < h.size(); ++k) {
        int total = 0;
        for (const auto& [key, s] : pages.dr.infinity().spots)
            if (key.first + key.second == static_cast<int>(k))
                total += s.E.dim();
        if (total != h[k])
            conv = false;
    }
    out["convergence"] = conv;

    bool pass = pages.all_pass && flmod_ok && hmods_ok && conv;
    out["pass"] = pass;
    return out;
}

Json check_vanishing(CheckContext& ctx)
{
    Json out;
    if (!ctx.spec.twist) {
        out["skipped"] = "no twist in the spec";
        return out;
    }
    int n = ctx.atlas.fan.n;
    bool ample = is_ample(ctx.spec.fan, *ctx.spec.twist);
    out["ample"] = ample;
    out["dim_less_p"] = ctx.atlas.validity.dim_less_p;

    Json table = Json::array();
    Json violations = Json::array();
    bool vanish = true;
    for (int i = 0; i <= n; ++i) {
        for (int l = 0; l <= i; ++l) {
            std::vector<int> dims =
                ctx.session.sheaf_h_dims(i, l, /*use_twist=*/true);
            Json row;
            row["i"] = i;
            row["l"] = l;
            row["h"] = dims_json(dims);
            table.push_back(row);
            for (size_t jdeg = 0; jdeg < dims.size(); ++jdeg) {
                if (static_cast<int>(jdeg) + i > n && dims[jdeg] != 0) {
                    vanish = false;
                    Json v;
                    v["i"] = i;
                    v["j"] = jdeg;
                    v["l"] = l;
                    v["dim"] = dims[jdeg];
                    violations.push_back(v);
                }
            }
        }
    }
    out["table"] = table;
    out["nonvanishing"] = violations;
    bool pass = (!ample || !ctx.atlas.validity.dim_less_p) || vanish;
    out["pass"] = pass;
    return out;
}

} // namespace

RunResult run_spec(const VarietySpec& spec, const RunOptions& opts)
{
    Fp::set_prime(static_cast<uint32_t>(spec.p));

    Atlas atlas = make_atlas(spec.fan, spec.divisor, spec.twist, spec.p);
    int radius =
        opts.weight_radius_override >= 0
            ? opts.weight_radius_override
            : (spec.weight_radius >= 0
                   ? spec.weight_radius
                   : default_weight_radius(
                         spec.fan, spec.twist ? &*spec.twist : nullptr));
    Session session(atlas, radius, opts.threads);

    FrobLift lift;
    lift.charts.resize(atlas.num_charts());
    for (const auto& [c, ps] : spec.lift) {
        LF_CHECK(c >= 0 && c < atlas.num_charts(), "SpecParseError",
                 "lift cone out of range");
        lift.charts[c] = ps;
    }
    SplitData split(atlas, lift);

    CheckContext ctx{spec, atlas, session, split, radius};

    std::vector<std::string> checks =
        !opts.check_override.empty() ? opts.check_override : spec.checks;
    if (checks.empty() || (checks.size() == 1 && checks[0] == "all")) {
        checks = {"shell-audit",    "cohomology", "residue",
                  "truncation",     "cartier",    "decomposition",
                  "splitting-laws", "homotopy",   "weight-ss",
                  "lifting-independence"};
        if (spec.twist)
            checks.push_back("vanishing");
        if (spec.morphism)
            checks.push_back("functoriality");
    }

    Json report;
    report["tool"] = "logfrob";
    report["version"] = "0.1.0";
    report["prime"] = spec.p;
    report["input"] = spec_to_json(spec);
    Json validity;
    validity["smooth"] = atlas.validity.smooth;
    validity["complete"] = atlas.validity.complete;
    validity["n"] = atlas.validity.n;
    validity["dim_less_p"] = atlas.validity.dim_less_p;
    report["validity"] = validity;
    if (spec.twist)
        report["ample"] = is_ample(spec.fan, *spec.twist);

    auto t0 = std::chrono::steady_clock::now();
    Json results;
    bool all_pass = true;
    Json skipped = Json::array();
    for (const auto& name : checks) {
        Json r;
        if (name == "shell-audit")
            r = check_shell_audit(ctx);
        else if (name == "cohomology")
            r = check_cohomology(ctx);
        else if (name == "decomposition")
            r = check_decomposition(ctx);
        else if (name == "cartier")
            r = check_cartier(ctx);
        else if (name == "truncation")
            r = check_truncation(ctx);
        else if (name == "residue")
            r = check_residue(ctx);
        else if (name == "splitting-laws")
            r = check_splitting_laws(ctx, 8);
        else if (name == "lifting-independence")
            r = check_lifting_independence(ctx, 3);
        else if (name == "homotopy")
            r = check_homotopy(ctx);
        else if (name == "functoriality")
            r = check_functoriality(ctx);
        else if (name == "weight-ss" || name == "mflc")
            r = check_weight_ss(ctx);
        else if (name == "vanishing")
            r = check_vanishing(ctx);
        else
            fail("SpecParseError", "unknown check: " + name);
        if (r.contains("skipped"))
            skipped.push_back(name);
        else if (!r.value("pass", false))
            all_pass = false;
        results[name] = r;
    }
    report["checks"] = results;
    report["skipped_checks"] = skipped;
    report["pass"] = all_pass;
    if (opts.emit_timing) {
        auto t1 = std::chrono::steady_clock::now();
        report["timing_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0)
                .count();
    }
    RunResult out;
    out.report = std::move(report);
    out.pass = all_pass;
    return out;
}

} // namespace logfrob
