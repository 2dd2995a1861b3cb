#include "logfrob/cech.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <set>
#include <thread>

#include "logfrob/error.hpp"

namespace logfrob {

int Atlas::tuple_id(const std::vector<int>& t) const
{
    auto it = tuple_ids.find(t);
    LF_ASSERT(it != tuple_ids.end(), "unknown chart tuple");
    return it->second;
}

Atlas make_atlas(const Fan& fan, const DivisorSet& divisor,
                 const std::optional<Twist>& twist, int p)
{
    Atlas atlas;
    atlas.fan = fan;
    atlas.divisor = divisor;
    atlas.twist = twist;
    atlas.p = p;
    atlas.validity = validate(fan, p);
    if (twist)
        LF_CHECK(twist->coeffs.size() == fan.rays.size(), "SpecParseError",
                 "twist must carry one coefficient per ray");

    const Twist* tw = twist ? &*twist : nullptr;
    for (const auto& cone : fan.max_cones)
        atlas.charts.push_back(make_context(fan, cone, divisor, tw));

    // all strictly increasing chart tuples, ordered by (length, lex)
    int nc = atlas.num_charts();
    for (int len = 1; len <= nc; ++len) {
        std::vector<int> idx(len);
        for (int t = 0; t < len; ++t)
            idx[t] = t;
        while (true) {
            Atlas::Tuple tp;
            tp.charts = idx;
            // common face: rays lying in every chart of the tuple
            std::vector<int> common = fan.max_cones[idx[0]];
            for (int t = 1; t < len; ++t) {
                std::vector<int> next;
                for (int r : common)
                    if (std::binary_search(fan.max_cones[idx[t]].begin(),
                                           fan.max_cones[idx[t]].end(), r))
                        next.push_back(r);
                common = next;
            }
            tp.ctx = make_context(fan, common, divisor, tw);
            atlas.tuple_ids[idx] = static_cast<int>(atlas.tuples.size());
            atlas.tuples.push_back(std::move(tp));

            int t = len - 1;
            while (t >= 0 && idx[t] == nc - len + t)
                --t;
            if (t < 0)
                break;
            ++idx[t];
            for (int u = t + 1; u < len; ++u)
                idx[u] = idx[u - 1] + 1;
        }
    }
    return atlas;
}

std::pair<int, int> alternating_tuple(const Atlas& atlas,
                                      std::vector<int> charts)
{
    int sign = 1;
    // insertion sort, tracking the permutation sign
    for (size_t i = 1; i < charts.size(); ++i) {
        size_t j = i;
        while (j > 0 && charts[j - 1] > charts[j]) {
            std::swap(charts[j - 1], charts[j]);
            sign = -sign;
            --j;
        }
    }
    for (size_t i = 1; i < charts.size(); ++i)
        if (charts[i] == charts[i - 1])
            return {0, -1};
    return {sign, atlas.tuple_id(charts)};
}

bool Cochain::is_zero() const
{
    for (const auto& [k, f] : entries_)
        if (!f.is_zero())
            return false;
    return true;
}

FormSum Cochain::get(int tuple, int s) const
{
    auto it = entries_.find({tuple, s});
    if (it == entries_.end())
        return FormSum(atlas_->fan.n);
    return it->second;
}

void Cochain::add(int tuple, int s, const FormSum& f)
{
    if (f.is_zero())
        return;
    auto key = std::make_pair(tuple, s);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        entries_.emplace(key, f);
        return;
    }
    it->second = it->second + f;
    if (it->second.is_zero())
        entries_.erase(it);
}

Cochain Cochain::operator+(const Cochain& o) const
{
    Cochain out = *this;
    for (const auto& [k, f] : o.entries_)
        out.add(k.first, k.second, f);
    return out;
}

Cochain Cochain::operator-(const Cochain& o) const
{
    Cochain out = *this;
    for (const auto& [k, f] : o.entries_)
        out.add(k.first, k.second, f * Fp(-1));
    return out;
}

Cochain Cochain::operator*(Fp c) const
{
    Cochain out(*atlas_);
    for (const auto& [k, f] : entries_)
        out.add(k.first, k.second, f * c);
    return out;
}

bool Cochain::operator==(const Cochain& o) const
{
    return (*this - o).is_zero();
}

Cochain Cochain::total_differential() const
{
    Cochain out(*atlas_);
    int nc = atlas_->num_charts();
    for (const auto& [key, f] : entries_) {
        const auto& tup = atlas_->tuples[key.first].charts;
        int r = static_cast<int>(tup.size()) - 1;
        // Cech part
        for (int c = 0; c < nc; ++c) {
            if (std::binary_search(tup.begin(), tup.end(), c))
                continue;
            std::vector<int> bigger = tup;
            auto pos = std::upper_bound(bigger.begin(), bigger.end(), c);
            int ins = static_cast<int>(pos - bigger.begin());
            bigger.insert(pos, c);
            int sg = (ins % 2 == 0) ? 1 : -1;
            out.add(atlas_->tuple_id(bigger), key.second, f * Fp(sg));
        }
        // de Rham part
        out.add(key.first, key.second + 1,
                f.d() * Fp(r % 2 == 0 ? 1 : -1));
    }
    return out;
}

Cochain Cochain::cup(const Cochain& o) const
{
    // Front-back juxtaposition with the sign (-1)^{s1 r2}; this is the
    // convention under which D = delta + (-1)^r d satisfies the Leibniz
    // rule, so cup powers of chain maps stay chain maps. All splitting
    // identities are checked inside this one consistent calculus.
    Cochain out(*atlas_);
    for (const auto& [k1, f1] : entries_) {
        const auto& t1 = atlas_->tuples[k1.first].charts;
        for (const auto& [k2, f2] : o.entries_) {
            const auto& t2 = atlas_->tuples[k2.first].charts;
            int r2 = static_cast<int>(t2.size()) - 1;
            if (t1.back() != t2.front())
                continue;
            std::vector<int> joined = t1;
            joined.insert(joined.end(), t2.begin() + 1, t2.end());
            bool increasing = true;
            for (size_t i = 1; i < joined.size(); ++i)
                if (joined[i - 1] >= joined[i])
                    increasing = false;
            if (!increasing)
                continue;
            int sg = (k1.second * r2) % 2 == 0 ? 1 : -1;
            out.add(atlas_->tuple_id(joined), k1.second + k2.second,
                    f1.wedge(f2) * Fp(sg));
        }
    }
    return out;
}

std::vector<Weight> Cochain::weights() const
{
    std::set<Weight> seen;
    for (const auto& [k, f] : entries_)
        for (const auto& w : f.weights())
            seen.insert(w);
    return {seen.begin(), seen.end()};
}

// ---- complex building ------------------------------------------------------

namespace {

VecF mbar_vector(const IVec& m)
{
    VecF v(m.size());
    for (int i = 0; i < m.size(); ++i)
        v(i) = Fp(m(i));
    return v;
}

// The de Rham complex only exists untwisted; the twist enters through the
// single-sheaf complexes.
ChartContext untwisted(const ChartContext& ctx)
{
    ChartContext out = ctx;
    std::fill(out.shift.begin(), out.shift.end(), 0);
    return out;
}

SubquotientPair slot_pair(const Atlas& atlas, const ChartContext& ctx,
                          const IVec& m, int s, const ComplexOptions& opts)
{
    int n = ctx.n;
    int dim = binom(n, s);
    SubquotientPair out{Subspace::zero(std::max(dim, 0)),
                        Subspace::zero(std::max(dim, 0))};
    if (s < 0 || s > n)
        return out;
    if (opts.fil_sub && s < *opts.fil_sub)
        return out;
    if (opts.tau && s >= atlas.p)
        return out;

    auto tau_kernel = [&](void) {
        MatF w = wedge_by_vector(mbar_vector(m), n, s);
        return rank_kernel_image(w).kernel;
    };

    if (opts.gr_level) {
        int l = *opts.gr_level;
        Subspace wl = weight_slice(ctx, m, s, l);
        Subspace wlm = weight_slice(ctx, m, s, l - 1);
        if (opts.tau && s == atlas.p - 1) {
            if (opts.gr_before_tau) {
                // tau of the graded complex: kernel of the induced d
                MatF w = wedge_by_vector(mbar_vector(m), n, s);
                Subspace wlm_next = weight_slice(ctx, m, s + 1, l - 1);
                out.big = wl.intersect(
                    wlm_next.preimage_under(w, dim));
                out.small = wlm;
            } else {
                Subspace k = tau_kernel();
                out.big = wl.intersect(k);
                out.small = wlm.intersect(k);
            }
        } else {
            out.big = wl;
            out.small = wlm;
        }
        return out;
    }

    Subspace b = opts.w_sub ? weight_slice(ctx, m, s, *opts.w_sub)
                            : form_space(ctx, m, s);
    if (opts.tau && s == atlas.p - 1)
        b = b.intersect(tau_kernel());
    out.big = b;
    return out;
}

} // namespace

int BuiltComplex::summand_offset(int k, int idx) const
{
    int off = 0;
    for (int t = 0; t < idx; ++t)
        off += summands[k][t].coords.dim();
    return off;
}

int BuiltComplex::find_summand(int k, int tuple, int s) const
{
    for (size_t t = 0; t < summands[k].size(); ++t)
        if (summands[k][t].tuple == tuple && summands[k][t].s == s)
            return static_cast<int>(t);
    return -1;
}

BuiltComplex build_weight_complex(const Atlas& atlas, const IVec& m,
                                  const ComplexOptions& opts)
{
    int n = atlas.fan.n;
    BuiltComplex c;
    c.m = m;
    c.kmax = (atlas.num_charts() - 1) + n;
    c.summands.resize(c.kmax + 1);
    c.dims.assign(c.kmax + 1, 0);

    for (int k = 0; k <= c.kmax; ++k) {
        for (size_t t = 0; t < atlas.tuples.size(); ++t) {
            int r = static_cast<int>(atlas.tuples[t].charts.size()) - 1;
            int s = k - r;
            if (s < 0 || s > n)
                continue;
            SubquotientPair pr =
                slot_pair(atlas, untwisted(atlas.tuples[t].ctx), m, s,
                          opts);
            Quotient q(pr.big, pr.small);
            if (q.dim() == 0)
                continue;
            c.summands[k].push_back(
                Summand{static_cast<int>(t), s, std::move(q)});
            c.dims[k] += c.summands[k].back().coords.dim();
        }
    }

    // differentials
    c.d_total.resize(c.kmax);
    c.d_cech.resize(c.kmax);
    VecF mbar = mbar_vector(m);
    int nc = atlas.num_charts();
    for (int k = 0; k < c.kmax; ++k) {
        MatF dt = MatF::Zero(c.dims[k + 1], c.dims[k]);
        MatF dc = MatF::Zero(c.dims[k + 1], c.dims[k]);
        for (size_t si = 0; si < c.summands[k].size(); ++si) {
            const Summand& src = c.summands[k][si];
            const auto& tup = atlas.tuples[src.tuple].charts;
            int r = static_cast<int>(tup.size()) - 1;
            int col0 = c.summand_offset(k, static_cast<int>(si));
            for (int rep = 0; rep < src.coords.dim(); ++rep) {
                VecF v = src.coords.reps().row(rep).transpose();
                int col = col0 + rep;
                // Cech direction
                for (int ch = 0; ch < nc; ++ch) {
                    if (std::binary_search(tup.begin(), tup.end(), ch))
                        continue;
                    std::vector<int> bigger = tup;
                    auto pos =
                        std::upper_bound(bigger.begin(), bigger.end(), ch);
                    int ins = static_cast<int>(pos - bigger.begin());
                    bigger.insert(pos, ch);
                    Fp sg(ins % 2 == 0 ? 1 : -1);
                    int tid = atlas.tuple_id(bigger);
                    int idx = c.find_summand(k + 1, tid, src.s);
                    if (idx < 0) {
                        SubquotientPair pr =
                            slot_pair(atlas,
                                      untwisted(atlas.tuples[tid].ctx), m,
                                      src.s, opts);
                        LF_ASSERT(pr.small.contains(v),
                                  "restriction leaves the subquotient");
                        continue;
                    }
                    const Summand& dst = c.summands[k + 1][idx];
                    VecF coords = dst.coords.project(v);
                    int row0 =
                        c.summand_offset(k + 1, idx);
                    for (int x = 0; x < coords.size(); ++x) {
                        dt(row0 + x, col) += sg * coords(x);
                        dc(row0 + x, col) += sg * coords(x);
                    }
                }
                // de Rham direction
                MatF w = wedge_by_vector(mbar, n, src.s);
                VecF dv = w * v;
                bool nonzero = false;
                for (int x = 0; x < dv.size(); ++x)
                    if (!dv(x).is_zero())
                        nonzero = true;
                if (nonzero) {
                    Fp sg(r % 2 == 0 ? 1 : -1);
                    int idx = c.find_summand(k + 1, src.tuple, src.s + 1);
                    if (idx < 0) {
                        SubquotientPair pr = slot_pair(
                            atlas, untwisted(atlas.tuples[src.tuple].ctx),
                            m, src.s + 1, opts);
                        LF_ASSERT(pr.small.contains(dv),
                                  "differential leaves the subquotient");
                    } else {
                        const Summand& dst = c.summands[k + 1][idx];
                        VecF coords = dst.coords.project(dv);
                        int row0 = c.summand_offset(k + 1, idx);
                        for (int x = 0; x < coords.size(); ++x)
                            dt(row0 + x, col) += sg * coords(x);
                    }
                }
            }
        }
        c.d_total[k] = std::move(dt);
        c.d_cech[k] = std::move(dc);
    }
    // D o D = 0 audit
    for (int k = 0; k + 1 < c.kmax; ++k) {
        LF_ASSERT(is_zero(c.d_total[k + 1] * c.d_total[k]),
                  "total differential does not square to zero");
        LF_ASSERT(is_zero(c.d_cech[k + 1] * c.d_cech[k]),
                  "Cech differential does not square to zero");
    }
    return c;
}

BuiltComplex build_sheaf_complex(const Atlas& atlas, const IVec& m, int i,
                                 std::optional<int> w_level, bool use_twist)
{
    BuiltComplex c;
    c.m = m;
    c.kmax = atlas.num_charts() - 1;
    c.summands.resize(c.kmax + 1);
    c.dims.assign(c.kmax + 1, 0);
    for (int k = 0; k <= c.kmax; ++k) {
        for (size_t t = 0; t < atlas.tuples.size(); ++t) {
            int r = static_cast<int>(atlas.tuples[t].charts.size()) - 1;
            if (r != k)
                continue;
            ChartContext ctx = atlas.tuples[t].ctx;
            if (!use_twist)
                std::fill(ctx.shift.begin(), ctx.shift.end(), 0);
            Subspace sp = w_level ? weight_slice(ctx, m, i, *w_level)
                                  : form_space(ctx, m, i);
            Quotient q(sp, Subspace::zero(sp.ambient()));
            if (q.dim() == 0)
                continue;
            c.summands[k].push_back(
                Summand{static_cast<int>(t), i, std::move(q)});
            c.dims[k] += c.summands[k].back().coords.dim();
        }
    }
    c.d_total.resize(c.kmax);
    c.d_cech.resize(c.kmax);
    int nc = atlas.num_charts();
    for (int k = 0; k < c.kmax; ++k) {
        MatF dt = MatF::Zero(c.dims[k + 1], c.dims[k]);
        for (size_t si = 0; si < c.summands[k].size(); ++si) {
            const Summand& src = c.summands[k][si];
            const auto& tup = atlas.tuples[src.tuple].charts;
            int col0 = c.summand_offset(k, static_cast<int>(si));
            for (int rep = 0; rep < src.coords.dim(); ++rep) {
                VecF v = src.coords.reps().row(rep).transpose();
                int col = col0 + rep;
                for (int ch = 0; ch < nc; ++ch) {
                    if (std::binary_search(tup.begin(), tup.end(), ch))
                        continue;
                    std::vector<int> bigger = tup;
                    auto pos =
                        std::upper_bound(bigger.begin(), bigger.end(), ch);
                    int ins = static_cast<int>(pos - bigger.begin());
                    bigger.insert(pos, ch);
                    Fp sg(ins % 2 == 0 ? 1 : -1);
                    int tid = atlas.tuple_id(bigger);
                    int idx = c.find_summand(k + 1, tid, i);
                    if (idx < 0)
                        continue; // restriction of zero slice
                    const Summand& dst = c.summands[k + 1][idx];
                    VecF coords = dst.coords.project(v);
                    int row0 = c.summand_offset(k + 1, idx);
                    for (int x = 0; x < coords.size(); ++x)
                        dt(row0 + x, col) += sg * coords(x);
                }
            }
        }
        c.d_cech[k] = dt;
        c.d_total[k] = std::move(dt);
    }
    return c;
}

SolvedComplex solve_complex(BuiltComplex c)
{
    SolvedComplex out;
    out.C = std::move(c);
    int kmax = out.C.kmax;
    out.cocycles.resize(kmax + 1);
    out.boundaries.resize(kmax + 1);
    out.H.resize(kmax + 1);
    for (int k = 0; k <= kmax; ++k) {
        if (k < kmax)
            out.cocycles[k] = rank_kernel_image(out.C.d_total[k]).kernel;
        else
            out.cocycles[k] = Subspace::full(out.C.dims[k]);
        if (k > 0)
            out.boundaries[k] =
                rank_kernel_image(out.C.d_total[k - 1]).image;
        else
            out.boundaries[k] = Subspace::zero(out.C.dims[k]);
        LF_ASSERT(out.cocycles[k].contains(out.boundaries[k]),
                  "boundaries escape cocycles");
        out.H[k] = Quotient(out.cocycles[k], out.boundaries[k]);
    }
    return out;
}

int SolvedComplex::h_dim(int k) const
{
    if (k < 0 || k > C.kmax)
        return 0;
    return H[k].dim();
}

std::vector<Subspace> w_flag_steps(const Atlas& atlas, const BuiltComplex& c,
                                   int k)
{
    int n = atlas.fan.n;
    std::vector<Subspace> steps;
    for (int l = -1; l <= n; ++l) {
        MatF rows(0, c.dims[k]);
        std::vector<RowF> acc;
        for (size_t si = 0; si < c.summands[k].size(); ++si) {
            const Summand& s = c.summands[k][si];
            ChartContext ctx = untwisted(atlas.tuples[s.tuple].ctx);
            Subspace wl = weight_slice(ctx, c.m, s.s, l);
            int off = c.summand_offset(k, static_cast<int>(si));
            for (int b = 0; b < wl.dim(); ++b) {
                VecF coords =
                    s.coords.project(wl.basis().row(b).transpose());
                RowF row = RowF::Zero(c.dims[k]);
                for (int x = 0; x < coords.size(); ++x)
                    row(off + x) = coords(x);
                acc.push_back(row);
            }
        }
        MatF mat(static_cast<int>(acc.size()), c.dims[k]);
        for (size_t i = 0; i < acc.size(); ++i)
            mat.row(static_cast<int>(i)) = acc[i];
        steps.push_back(Subspace::span_rows(mat, c.dims[k]));
    }
    return steps;
}

std::vector<Subspace> fil_flag_steps(const Atlas& atlas,
                                     const BuiltComplex& c, int k)
{
    int n = atlas.fan.n;
    std::vector<Subspace> steps;
    for (int l = 0; l <= n + 1; ++l) {
        std::vector<RowF> acc;
        for (size_t si = 0; si < c.summands[k].size(); ++si) {
            const Summand& s = c.summands[k][si];
            if (s.s < l)
                continue;
            int off = c.summand_offset(k, static_cast<int>(si));
            for (int b = 0; b < s.coords.dim(); ++b) {
                RowF row = RowF::Zero(c.dims[k]);
                row(off + b) = Fp(1);
                acc.push_back(row);
            }
        }
        MatF mat(static_cast<int>(acc.size()), c.dims[k]);
        for (size_t i = 0; i < acc.size(); ++i)
            mat.row(static_cast<int>(i)) = acc[i];
        steps.push_back(Subspace::span_rows(mat, c.dims[k]));
    }
    return steps;
}

VecF embed_cochain(const BuiltComplex& c, const Atlas& atlas,
                   const Cochain& cochain, const IVec& m, int k)
{
    VecF v = VecF::Zero(c.dims[k]);
    Weight w = to_weight(m);
    for (size_t si = 0; si < c.summands[k].size(); ++si) {
        const Summand& s = c.summands[k][si];
        FormSum f = cochain.get(s.tuple, s.s).component_weight(w);
        VecF vec = wedge_vector(f, w, atlas.fan.n, s.s);
        VecF coords = s.coords.project(vec);
        int off = c.summand_offset(k, static_cast<int>(si));
        for (int x = 0; x < coords.size(); ++x)
            v(off + x) = coords(x);
    }
    // consistency: entries at slots that were dropped must vanish
    for (const auto& [key, f] : cochain.entries()) {
        const auto& tup = atlas.tuples[key.first].charts;
        int r = static_cast<int>(tup.size()) - 1;
        if (r + key.second != k)
            continue;
        if (c.find_summand(k, key.first, key.second) >= 0)
            continue;
        FormSum part = f.component_weight(w);
        LF_ASSERT(part.is_zero(),
                  "cochain has weight components outside the complex");
    }
    return v;
}

Cochain extract_cochain(const BuiltComplex& c, const Atlas& atlas,
                        const VecF& coords, int k)
{
    Cochain out(atlas);
    Weight w = to_weight(c.m);
    for (size_t si = 0; si < c.summands[k].size(); ++si) {
        const Summand& s = c.summands[k][si];
        int off = c.summand_offset(k, static_cast<int>(si));
        VecF local = coords.segment(off, s.coords.dim());
        VecF vec = s.coords.lift(local);
        out.add(s.tuple, s.s,
                from_wedge_vector(vec, w, atlas.fan.n, s.s));
    }
    return out;
}

// ---- session ---------------------------------------------------------------

Session::Session(Atlas atlas, int weight_radius, int threads)
    : atlas_(std::move(atlas)), radius_(weight_radius),
      threads_(std::max(1, threads))
{
    const Twist* tw = atlas_.twist ? &*atlas_.twist : nullptr;
    support_ = weight_support(atlas_.fan, tw, radius_);
}

const SolvedComplex& Session::weight(const IVec& m)
{
    Weight w = to_weight(m);
    auto it = cache_.find(w);
    if (it != cache_.end())
        return *it->second;
    auto solved = std::make_shared<SolvedComplex>(
        solve_complex(build_weight_complex(atlas_, m)));
    return *cache_.emplace(w, std::move(solved)).first->second;
}

void Session::warm_up()
{
    std::vector<IVec> todo;
    for (const auto& m : support_)
        if (!cache_.count(to_weight(m)))
            todo.push_back(m);
    if (todo.empty())
        return;
    if (threads_ <= 1) {
        for (const auto& m : todo)
            weight(m);
        return;
    }
    std::vector<std::shared_ptr<SolvedComplex>> slots(todo.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= todo.size())
                return;
            slots[i] = std::make_shared<SolvedComplex>(
                solve_complex(build_weight_complex(atlas_, todo[i])));
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads_; ++t)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    for (size_t i = 0; i < todo.size(); ++i)
        cache_.emplace(to_weight(todo[i]), std::move(slots[i]));
}

std::vector<int> Session::total_h_dims()
{
    warm_up();
    std::vector<int> dims(atlas_.num_charts() + atlas_.fan.n, 0);
    for (const auto& m : support_) {
        const SolvedComplex& s = weight(m);
        for (int k = 0; k <= s.C.kmax; ++k)
            dims[k] += s.h_dim(k);
    }
    return dims;
}

const SolvedComplex& Session::sheaf_weight(const IVec& m, int i,
                                           std::optional<int> w_level,
                                           bool use_twist)
{
    auto key = std::make_tuple(to_weight(m), i,
                               w_level ? *w_level : -1000, use_twist);
    auto it = sheaf_cache_.find(key);
    if (it != sheaf_cache_.end())
        return *it->second;
    auto solved = std::make_shared<SolvedComplex>(solve_complex(
        build_sheaf_complex(atlas_, m, i, w_level, use_twist)));
    return *sheaf_cache_.emplace(key, std::move(solved)).first->second;
}

std::vector<int> Session::sheaf_h_dims(int i, std::optional<int> w_level,
                                       bool use_twist)
{
    std::vector<int> dims(atlas_.num_charts(), 0);
    for (const auto& m : support_) {
        const SolvedComplex& s = sheaf_weight(m, i, w_level, use_twist);
        for (int k = 0; k <= s.C.kmax; ++k)
            dims[k] += s.h_dim(k);
    }
    return dims;
}

Subspace Session::h_w_filtered(const IVec& m, int k, int l)
{
    const SolvedComplex& s = weight(m);
    std::vector<Subspace> steps = w_flag_steps(atlas_, s.C, k);
    Subspace wl = steps[std::min(std::max(l + 1, 0),
                                 static_cast<int>(steps.size()) - 1)];
    Subspace inker = wl.intersect(s.cocycles[k]);
    std::vector<RowF> rows;
    for (int b = 0; b < inker.dim(); ++b)
        rows.push_back(
            s.H[k].project(inker.basis().row(b).transpose()).transpose());
    MatF mat(static_cast<int>(rows.size()), s.H[k].dim());
    for (size_t i = 0; i < rows.size(); ++i)
        mat.row(static_cast<int>(i)) = rows[i];
    return Subspace::span_rows(mat, s.H[k].dim());
}

Subspace Session::h_fil_filtered(const IVec& m, int k, int l)
{
    const SolvedComplex& s = weight(m);
    std::vector<Subspace> steps = fil_flag_steps(atlas_, s.C, k);
    int idx = std::min(std::max(l, 0), static_cast<int>(steps.size()) - 1);
    Subspace fl = steps[idx];
    Subspace inker = fl.intersect(s.cocycles[k]);
    std::vector<RowF> rows;
    for (int b = 0; b < inker.dim(); ++b)
        rows.push_back(
            s.H[k].project(inker.basis().row(b).transpose()).transpose());
    MatF mat(static_cast<int>(rows.size()), s.H[k].dim());
    for (size_t i = 0; i < rows.size(); ++i)
        mat.row(static_cast<int>(i)) = rows[i];
    return Subspace::span_rows(mat, s.H[k].dim());
}

std::vector<int> Session::subcomplex_h_dims(int l)
{
    std::vector<int> dims(atlas_.num_charts() + atlas_.fan.n, 0);
    ComplexOptions opts;
    opts.w_sub = l;
    for (const auto& m : support_) {
        SolvedComplex s = solve_complex(build_weight_complex(atlas_, m, opts));
        for (int k = 0; k <= s.C.kmax; ++k)
            dims[k] += s.h_dim(k);
    }
    return dims;
}

std::map<Weight, VecF> Session::class_of(const Cochain& c, int k,
                                         Cochain* primitive)
{
    LF_CHECK(c.total_differential().is_zero(), "NotACocycle",
             "class_of requires a total cocycle");
    std::map<Weight, VecF> out;
    bool all_zero = true;
    if (primitive)
        *primitive = Cochain(atlas_);
    for (const auto& w : c.weights()) {
        const SolvedComplex& s = weight(to_ivec(w));
        VecF coords = embed_cochain(s.C, atlas_, c, to_ivec(w), k);
        VecF cls = s.H[k].project(coords);
        for (int x = 0; x < cls.size(); ++x)
            if (!cls(x).is_zero())
                all_zero = false;
        out[w] = cls;
        if (primitive && k > 0) {
            VecF residual = coords - s.H[k].lift(cls);
            auto x = solve(s.C.d_total[k - 1], residual);
            LF_ASSERT(x.has_value(), "boundary solve failed");
            *primitive =
                *primitive + extract_cochain(s.C, atlas_, *x, k - 1);
        }
    }
    if (primitive && !all_zero)
        *primitive = Cochain(atlas_);
    return out;
}

void Session::shell_audit()
{
    const Twist* tw = atlas_.twist ? &*atlas_.twist : nullptr;
    for (const auto& m : weight_shell(atlas_.fan, tw, radius_)) {
        SolvedComplex s = solve_complex(build_weight_complex(atlas_, m));
        for (int k = 0; k <= s.C.kmax; ++k)
            LF_CHECK(s.h_dim(k) == 0, "RadiusTooSmall",
                     "shell weight carries cohomology in degree " +
                         std::to_string(k));
        if (tw) {
            for (int i = 0; i <= atlas_.fan.n; ++i) {
                SolvedComplex sh = solve_complex(build_sheaf_complex(
                    atlas_, m, i, std::nullopt, true));
                for (int k = 0; k <= sh.C.kmax; ++k)
                    LF_CHECK(sh.h_dim(k) == 0, "RadiusTooSmall",
                             "shell weight carries twisted sheaf "
                             "cohomology");
            }
        }
    }
}

MuCheckResult truncation_mu_check(const Atlas& atlas, const IVec& m, int l)
{
    ComplexOptions lhs;
    lhs.tau = true;
    lhs.gr_level = l;
    lhs.gr_before_tau = false; // Gr of the truncated complex
    ComplexOptions rhs;
    rhs.tau = true;
    rhs.gr_level = l;
    rhs.gr_before_tau = true; // truncation of the graded complex

    SolvedComplex a = solve_complex(build_weight_complex(atlas, m, lhs));
    SolvedComplex b = solve_complex(build_weight_complex(atlas, m, rhs));
    MuCheckResult out;
    out.pass = true;
    for (int k = 0; k <= a.C.kmax; ++k) {
        out.lhs_dims.push_back(a.h_dim(k));
        out.rhs_dims.push_back(b.h_dim(k));
        if (a.h_dim(k) != b.h_dim(k))
            out.pass = false;
    }
    return out;
}

} // namespace logfrob
