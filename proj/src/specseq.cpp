#include "logfrob/specseq.hpp"

#include <algorithm>

#include "logfrob/error.hpp"

namespace logfrob {

int FilteredComplexFp::dim_at(int deg) const
{
    int k = deg - deg_lo;
    if (k < 0 || k >= static_cast<int>(dims.size()))
        return 0;
    return dims[k];
}

MatF FilteredComplexFp::d_from(int deg) const
{
    int k = deg - deg_lo;
    if (k < 0 || k + 1 >= static_cast<int>(dims.size()))
        return MatF::Zero(dim_at(deg + 1), dim_at(deg));
    return d[k];
}

Subspace FilteredComplexFp::w_step(int deg, int l) const
{
    int k = deg - deg_lo;
    if (k < 0 || k >= static_cast<int>(dims.size()))
        return Subspace::zero(0);
    if (l < w_lo)
        return Subspace::zero(dims[k]);
    if (l > w_hi)
        return Subspace::full(dims[k]);
    return W[k][l - w_lo];
}

Subspace FilteredComplexFp::fil_step(int deg, int l) const
{
    int k = deg - deg_lo;
    if (k < 0 || k >= static_cast<int>(dims.size()))
        return Subspace::zero(0);
    if (l < f_lo)
        return Subspace::full(dims[k]);
    if (l > f_hi)
        return Subspace::zero(dims[k]);
    return Fil[k][l - f_lo];
}

void FilteredComplexFp::validate() const
{
    for (size_t k = 0; k + 1 < dims.size(); ++k) {
        LF_ASSERT(d[k].rows() == dims[k + 1] && d[k].cols() == dims[k],
                  "differential shape mismatch");
        if (k + 2 < dims.size())
            LF_ASSERT(is_zero(d[k + 1] * d[k]), "d^2 != 0");
    }
    for (size_t k = 0; k < dims.size(); ++k) {
        int deg = deg_lo + static_cast<int>(k);
        for (int l = w_lo; l <= w_hi; ++l) {
            LF_ASSERT(w_step(deg + 1, l)
                          .contains(w_step(deg, l).image_under(d_from(deg))),
                      "differential does not respect W");
            if (l > w_lo)
                LF_ASSERT(w_step(deg, l).contains(w_step(deg, l - 1)),
                          "W flag not increasing");
        }
        LF_ASSERT(w_step(deg, w_hi).dim() == dims[k], "W flag not exhaustive");
        for (int l = f_lo; l <= f_hi; ++l) {
            LF_ASSERT(
                fil_step(deg + 1, l)
                    .contains(fil_step(deg, l).image_under(d_from(deg))),
                "differential does not respect Fil");
            if (l > f_lo)
                LF_ASSERT(fil_step(deg, l - 1).contains(fil_step(deg, l)),
                          "Fil flag not decreasing");
        }
        LF_ASSERT(fil_step(deg, f_lo).dim() == dims[k],
                  "Fil flag not exhaustive");
    }
}

std::vector<int> FilteredComplexFp::h_dims() const
{
    std::vector<int> out;
    for (size_t k = 0; k < dims.size(); ++k) {
        int deg = deg_lo + static_cast<int>(k);
        int zdim = rank_kernel_image(d_from(deg)).kernel.dim();
        int bdim = (k > 0) ? rank_of(d[k - 1]) : 0;
        out.push_back(zdim - bdim);
    }
    return out;
}

const PageSpot* Page::spot(int i, int j) const
{
    auto it = spots.find({i, j});
    return it == spots.end() ? nullptr : &it->second;
}

SpectralSequence::SpectralSequence(const FilteredComplexFp& k, Along along,
                                   bool three_filtrations)
    : k_(&k), along_(along), three_(three_filtrations)
{
    if (along_ == Along::W) {
        i_lo_ = -k.w_hi;
        i_hi_ = -k.w_lo;
    } else {
        i_lo_ = k.f_lo;
        i_hi_ = k.f_hi;
    }
}

Subspace SpectralSequence::filt(int deg, int i) const
{
    // decreasing reinterpretation; clamp to full/zero outside the range
    if (along_ == Along::W)
        return k_->w_step(deg, -i);
    return k_->fil_step(deg, i);
}

PageSpot SpectralSequence::make_spot(int r, int i, int j) const
{
    PageSpot s;
    s.i = i;
    s.j = j;
    int deg = i + j;
    int dim = k_->dim_at(deg);
    MatF dmat = k_->d_from(deg);
    MatF dprev = k_->d_from(deg - 1);

    auto pre = [&](const Subspace& target) {
        if (k_->dim_at(deg + 1) == 0)
            return Subspace::full(dim);
        return target.preimage_under(dmat, dim);
    };
    s.Z = filt(deg, i).intersect(pre(filt(deg + 1, i + r)));
    Subspace first;
    if (k_->dim_at(deg - 1) == 0) {
        first = Subspace::zero(dim);
    } else {
        Subspace srcpre =
            (dim == 0) ? Subspace::full(k_->dim_at(deg - 1))
                       : filt(deg, i).preimage_under(dprev, k_->dim_at(deg - 1));
        first = filt(deg - 1, i - r + 1).intersect(srcpre).image_under(dprev);
    }
    Subspace second = filt(deg, i + 1).intersect(pre(filt(deg + 1, i + r)));
    s.B = first.sum(second);
    LF_ASSERT(s.Z.contains(s.B), "B_r escapes Z_r");
    s.E = Quotient(s.Z, s.B);
    return s;
}

PageSpot SpectralSequence::make_infinity_spot(int i, int j) const
{
    PageSpot s;
    s.i = i;
    s.j = j;
    int deg = i + j;
    int dim = k_->dim_at(deg);
    Subspace kerd = rank_kernel_image(k_->d_from(deg)).kernel;
    Subspace imd = (k_->dim_at(deg - 1) == 0)
                       ? Subspace::zero(dim)
                       : rank_kernel_image(k_->d_from(deg - 1)).image;
    s.Z = filt(deg, i).intersect(kerd);
    s.B = filt(deg, i).intersect(imd).sum(
        filt(deg, i + 1).intersect(kerd));
    LF_ASSERT(s.Z.contains(s.B), "B_inf escapes Z_inf");
    s.E = Quotient(s.Z, s.B);
    return s;
}

void SpectralSequence::attach_three_filtrations(Page& page, const Page* prev)
{
    int f_lo = k_->f_lo, f_hi = k_->f_hi;
    int levels = f_hi - f_lo + 2; // one extra zero level
    for (auto& [key, s] : page.spots) {
        int deg = s.i + s.j;
        int dim = k_->dim_at(deg);
        MatF dmat = k_->d_from(deg);
        auto project_span = [&](const Subspace& sub) {
            std::vector<RowF> rows;
            for (int b = 0; b < sub.dim(); ++b)
                rows.push_back(
                    s.E.project(sub.basis().row(b).transpose()).transpose());
            MatF m(static_cast<int>(rows.size()), s.E.dim());
            for (size_t x = 0; x < rows.size(); ++x)
                m.row(static_cast<int>(x)) = rows[x];
            return Subspace::span_rows(m, s.E.dim());
        };
        auto pre = [&](const Subspace& target) {
            if (k_->dim_at(deg + 1) == 0)
                return Subspace::full(dim);
            return target.preimage_under(dmat, dim);
        };
        for (int t = 0; t < levels; ++t) {
            int l = f_lo + t;
            Subspace fl_here = k_->fil_step(deg, l);
            Subspace fl_next = k_->fil_step(deg + 1, l);
            // F_d: classes of Z_r computed inside the subcomplex Fil^l K
            Subspace zl = filt(deg, s.i)
                              .intersect(fl_here)
                              .intersect(pre(filt(deg + 1, s.i + page.r)
                                                 .intersect(fl_next)));
            s.Fd.push_back(project_span(zl.sum(s.B).intersect(s.Z)));
            // F_{d*}: kernel of the map to the quotient complex K/Fil^l
            Subspace p1, p2;
            {
                int dprev_dim = k_->dim_at(deg - 1);
                if (dprev_dim == 0) {
                    p1 = Subspace::zero(dim);
                } else {
                    MatF dprev = k_->d_from(deg - 1);
                    Subspace src =
                        filt(deg - 1, s.i - page.r + 1)
                            .sum(k_->fil_step(deg - 1, l))
                            .intersect(
                                (dim == 0)
                                    ? Subspace::full(dprev_dim)
                                    : filt(deg, s.i)
                                          .sum(fl_here)
                                          .preimage_under(dprev, dprev_dim));
                    p1 = src.image_under(dprev);
                }
                p2 = filt(deg, s.i + 1)
                         .sum(fl_here)
                         .intersect(pre(filt(deg + 1, s.i + page.r)
                                            .sum(fl_next)));
            }
            Subspace pulled = fl_here.sum(p1).sum(p2);
            s.Fdstar.push_back(project_span(pulled.intersect(s.Z)));
            // F_rec
            Subspace lrec;
            if (page.r == 0) {
                lrec = zl.sum(s.B).intersect(s.Z);
            } else {
                LF_ASSERT(prev != nullptr, "missing previous page");
                const PageSpot* ps = prev->spot(s.i, s.j);
                LF_ASSERT(ps != nullptr, "missing previous spot");
                const Subspace& lprev = ps->frec_pullback[t];
                // ker d_{r-1} pulled back: Z_r + B_{r-1}; im d_{r-1} pulled
                // back: d(Z_{r-1} at (i-r+1, j+r-2)) + B_{r-1}
                int rprev = page.r - 1;
                const PageSpot* psrc = prev->spot(s.i - rprev, s.j + rprev - 1);
                Subspace im_pullback = ps->B;
                if (psrc && k_->dim_at(deg - 1) > 0)
                    im_pullback = im_pullback.sum(
                        psrc->Z.image_under(k_->d_from(deg - 1)));
                lrec = lprev.intersect(s.Z.sum(ps->B))
                           .sum(im_pullback)
                           .intersect(s.Z)
                           .sum(s.B);
            }
            s.frec_pullback.push_back(lrec);
            s.Frec.push_back(project_span(lrec));
        }
        if (page.r == 0) {
            for (int t = 0; t < levels; ++t)
                LF_ASSERT(s.Fd[t] == s.Fdstar[t],
                          "F_d != F_{d*} on the zeroth page");
        }
        // containment audit: F_d inside F_rec inside F_{d*}
        for (int t = 0; t < levels; ++t) {
            LF_ASSERT(s.Frec[t].contains(s.Fd[t]), "F_d escapes F_rec");
            LF_ASSERT(s.Fdstar[t].contains(s.Frec[t]), "F_rec escapes F_d*");
        }
    }
}

void SpectralSequence::run(int r_stop)
{
    pages_.clear();
    int auto_stop = (i_hi_ - i_lo_) + 2;
    int stop = r_stop >= 0 ? r_stop : auto_stop;

    for (int r = 0; r <= stop; ++r) {
        Page page;
        page.r = r;
        for (int i = i_lo_; i <= i_hi_; ++i) {
            for (int deg = k_->deg_lo; deg <= k_->deg_hi(); ++deg) {
                int j = deg - i;
                page.spots[{i, j}] = make_spot(r, i, j);
            }
        }
        // differentials
        for (auto& [key, s] : page.spots) {
            int deg = s.i + s.j;
            auto target = page.spots.find({s.i + r, s.j - r + 1});
            int tdim = (target == page.spots.end())
                           ? 0
                           : target->second.E.dim();
            MatF dm = MatF::Zero(tdim, s.E.dim());
            if (tdim > 0 && s.E.dim() > 0) {
                const PageSpot& ts = target->second;
                for (int b = 0; b < s.E.dim(); ++b) {
                    VecF x = s.E.reps().row(b).transpose();
                    VecF dx = k_->d_from(deg) * x;
                    dm.col(b) = ts.E.project(dx);
                }
            }
            s.d = dm;
            for (int rr = 0; rr < s.d.rows(); ++rr)
                for (int cc = 0; cc < s.d.cols(); ++cc)
                    if (!s.d(rr, cc).is_zero())
                        page.zero_differentials = false;
        }
        if (three_)
            attach_three_filtrations(page,
                                     pages_.empty() ? nullptr
                                                    : &pages_.back());
        // recursion audit against the previous page
        if (!pages_.empty()) {
            const Page& prev = pages_.back();
            for (auto& [key, s] : page.spots) {
                const PageSpot* ps = prev.spot(s.i, s.j);
                const PageSpot* psrc =
                    prev.spot(s.i - prev.r, s.j + prev.r - 1);
                int kerdim = ps ? rank_kernel_image(ps->d).kernel.dim() : 0;
                int imrank = psrc ? rank_of(psrc->d) : 0;
                LF_ASSERT(s.E.dim() == kerdim - imrank,
                          "Z/B recursion audit failed");
            }
        }
        pages_.push_back(std::move(page));
    }

    // infinity page and convergence audit
    infinity_ = Page();
    infinity_.r = -1;
    for (int i = i_lo_; i <= i_hi_; ++i)
        for (int deg = k_->deg_lo; deg <= k_->deg_hi(); ++deg)
            infinity_.spots[{i, deg - i}] = make_infinity_spot(i, deg - i);
    std::vector<int> h = k_->h_dims();
    for (int deg = k_->deg_lo; deg <= k_->deg_hi(); ++deg) {
        int total = 0;
        for (int i = i_lo_; i <= i_hi_; ++i) {
            const PageSpot* s = infinity_.spot(i, deg - i);
            if (s)
                total += s->E.dim();
        }
        LF_ASSERT(total == h[deg - k_->deg_lo],
                  "convergence audit failed in degree " +
                      std::to_string(deg));
    }
    // degeneration radius: one past the last page with a nonzero
    // differential (differentials vanish from some r on since the
    // filtration is finite)
    degeneration_radius_ = 1;
    for (const auto& page : pages_)
        if (page.r >= 1 && !page.zero_differentials)
            degeneration_radius_ = page.r + 1;
    // the last computed page must agree with E_infinity dimensionwise
    const Page& last = pages_.back();
    for (const auto& [key, s] : infinity_.spots) {
        const PageSpot* ls = last.spot(key.first, key.second);
        LF_ASSERT(ls && ls->E.dim() == s.E.dim(),
                  "stabilization audit failed");
    }
}

// ---- MFL complexes ----------------------------------------------------------

namespace {

// graded projection onto the Fil-level-l coordinates; requires the Fil flag
// to be coordinate-aligned (unit-vector echelon bases)
VecF graded_projection(const FilteredComplexFp& k, int deg, int l,
                       const VecF& v)
{
    Subspace here = k.fil_step(deg, l);
    Subspace next = k.fil_step(deg, l + 1);
    VecF out = VecF::Zero(v.size());
    // coordinates belonging to Fil^l but not Fil^{l+1}
    for (int b = 0; b < here.dim(); ++b) {
        int piv = -1;
        for (int c = 0; c < here.basis().cols(); ++c)
            if (!here.basis()(b, c).is_zero()) {
                piv = c;
                break;
            }
        VecF unit = VecF::Zero(v.size());
        unit(piv) = Fp(1);
        if (!next.contains(unit))
            out(piv) = v(piv);
    }
    return out;
}

void require_coordinate_aligned(const FilteredComplexFp& k)
{
    for (size_t kk = 0; kk < k.dims.size(); ++kk) {
        int deg = k.deg_lo + static_cast<int>(kk);
        for (int l = k.f_lo; l <= k.f_hi; ++l) {
            const Subspace& s = k.fil_step(deg, l);
            for (int b = 0; b < s.dim(); ++b) {
                int nz = 0;
                for (int c = 0; c < s.basis().cols(); ++c)
                    if (!s.basis()(b, c).is_zero())
                        ++nz;
                LF_CHECK(nz == 1, "AxiomViolation",
                         "Fil flag is not coordinate-aligned");
            }
        }
    }
}

} // namespace

void validate_mflc(const MFLComplex& m)
{
    const FilteredComplexFp& dr = m.dR;
    const FilteredComplexFp& hg = m.hig;
    dr.validate();
    hg.validate();
    LF_CHECK(dr.dims == hg.dims && dr.deg_lo == hg.deg_lo, "AxiomViolation",
             "graded complex must share the underlying spaces");
    require_coordinate_aligned(m.dR);

    // psi is a chain map
    for (size_t k = 0; k + 1 < dr.dims.size(); ++k) {
        int deg = dr.deg_lo + static_cast<int>(k);
        LF_CHECK(mat_equal(m.psi[k + 1] * hg.d_from(deg),
                           dr.d_from(deg) * m.psi[k]),
                 "AxiomViolation", "psi is not a chain map");
    }
    // psi is W-filtered
    for (size_t k = 0; k < dr.dims.size(); ++k) {
        int deg = dr.deg_lo + static_cast<int>(k);
        for (int l = dr.w_lo; l <= dr.w_hi; ++l)
            LF_CHECK(dr.w_step(deg, l).contains(
                         hg.w_step(deg, l).image_under(m.psi[k])),
                     "AxiomViolation", "psi is not W-filtered");
    }
    // psi is a W-filtered quasi-isomorphism: per level, the induced map on
    // the cohomology of the subcomplexes W_l is an isomorphism
    for (int l = dr.w_lo - 1; l <= dr.w_hi; ++l) {
        for (size_t k = 0; k < dr.dims.size(); ++k) {
            int deg = dr.deg_lo + static_cast<int>(k);
            auto level_h = [&](const FilteredComplexFp& c) {
                Subspace sub = c.w_step(deg, l);
                Subspace ker =
                    sub.intersect(rank_kernel_image(c.d_from(deg)).kernel);
                Subspace im =
                    (c.dim_at(deg - 1) == 0)
                        ? Subspace::zero(c.dim_at(deg))
                        : c.w_step(deg - 1, l).image_under(c.d_from(deg - 1));
                return Quotient(ker, im);
            };
            Quotient hd = level_h(dr);
            Quotient hh = level_h(hg);
            LF_CHECK(hd.dim() == hh.dim(), "AxiomViolation",
                     "psi level dims disagree at W_" + std::to_string(l));
            if (hd.dim() == 0)
                continue;
            MatF induced(hd.dim(), hh.dim());
            for (int b = 0; b < hh.dim(); ++b)
                induced.col(b) =
                    hd.project(m.psi[k] * hh.reps().row(b).transpose());
            LF_CHECK(rank_of(induced) == hd.dim(), "AxiomViolation",
                     "psi is not a quasi-isomorphism at level W_" +
                         std::to_string(l));
        }
    }
}

namespace {

// mu on one spot: the canonical Gr_{Fil_rec} basis of E_r,dR expressed
// through Fil^l cocycle representatives and their graded projections.
// Empty optional when Fil^l Z_r fails to surject onto a graded piece
// (Fil_d strictly smaller than Fil_rec; impossible for a genuine MFLC).
std::optional<MatF> spot_mu(const MFLComplex& m, const PageSpot& sd,
                            const PageSpot& sh, int deg)
{
    int f_lo = m.dR.f_lo;
    int levels = static_cast<int>(sd.Frec.size());
    MatF mu = MatF::Zero(sh.E.dim(), sd.E.dim());
    int col0 = 0;
    for (int t = 0; t < levels; ++t) {
        int l = f_lo + t;
        int grdim = sd.Frec[t].dim() -
                    (t + 1 < levels ? sd.Frec[t + 1].dim() : 0);
        if (grdim == 0)
            continue;
        Subspace sl = m.dR.fil_step(deg, l).intersect(sd.Z);
        Subspace grown =
            t + 1 < levels ? sd.Frec[t + 1] : Subspace::zero(sd.E.dim());
        std::vector<VecF> reps;
        for (int b = 0;
             b < sl.dim() && static_cast<int>(reps.size()) < grdim; ++b) {
            VecF v = sl.basis().row(b).transpose();
            VecF cls = sd.E.project(v);
            if (grown.contains(cls))
                continue;
            grown =
                grown.sum(Subspace::span_rows(cls.transpose(), sd.E.dim()));
            reps.push_back(v);
        }
        if (static_cast<int>(reps.size()) != grdim)
            return std::nullopt;
        Quotient grq(sd.Frec[t], t + 1 < levels
                                     ? sd.Frec[t + 1]
                                     : Subspace::zero(sd.E.dim()));
        MatF images(sh.E.dim(), grdim);
        MatF trans(grdim, grdim);
        for (int b = 0; b < grdim; ++b) {
            VecF proj = graded_projection(m.dR, deg, l, reps[b]);
            LF_ASSERT(sh.Z.contains(proj),
                      "graded projection leaves Z_r of the graded complex");
            images.col(b) = sh.E.project(proj);
            trans.col(b) = grq.project(sd.E.project(reps[b]));
        }
        MatF block = images * invert(trans);
        for (int b = 0; b < grdim; ++b)
            mu.col(col0 + b) = block.col(b);
        col0 += grdim;
    }
    if (col0 != sd.E.dim())
        return std::nullopt;
    return mu;
}

// Gr_{Fil_rec}(d_r) in the canonical graded bases of the two spots.
MatF spot_gr_d(const PageSpot& src, const PageSpot& dst)
{
    int levels = static_cast<int>(src.Frec.size());
    Flag fs, fd;
    fs.increasing = fd.increasing = false;
    fs.ambient = src.E.dim();
    fd.ambient = dst.E.dim();
    for (int t = 0; t < levels; ++t) {
        fs.steps.push_back(src.Frec[t]);
        fd.steps.push_back(dst.Frec[t]);
    }
    FLModule ms = make_fl_module(fs, MatF::Identity(fs.ambient, fs.ambient));
    FLModule md = make_fl_module(fd, MatF::Identity(fd.ambient, fd.ambient));
    return gr_matrix(src.d, ms, md);
}

} // namespace

MFLPages mfl_pages(const MFLComplex& m, int r_stop)
{
    validate_mflc(m);
    MFLPages out(m.dR, m.hig);
    out.dr.run(r_stop);
    out.hig.run(r_stop);
    out.degeneration_radius = out.dr.degeneration_radius();
    out.all_pass = true;

    int levels = m.dR.f_hi - m.dR.f_lo + 2;

    for (size_t pr = 1; pr < out.dr.pages().size(); ++pr) {
        const Page& pd = out.dr.pages()[pr];
        const Page& ph = out.hig.pages()[pr];
        int r = pd.r;

        // pass 1: psi_r and mu on every spot of this page
        std::map<std::pair<int, int>, MatF> psis;
        std::map<std::pair<int, int>, std::optional<MatF>> mus;
        for (const auto& [key, sd] : pd.spots) {
            const PageSpot* sh = ph.spot(key.first, key.second);
            LF_ASSERT(sh, "missing Higgs page spot");
            int deg = key.first + key.second;
            size_t kk = static_cast<size_t>(deg - m.dR.deg_lo);
            MatF psir = MatF::Zero(sd.E.dim(), sh->E.dim());
            for (int b = 0; b < sh->E.dim(); ++b) {
                VecF y = m.psi[kk] * sh->E.reps().row(b).transpose();
                LF_ASSERT(sd.Z.contains(y), "psi leaves Z_r");
                psir.col(b) = sd.E.project(y);
            }
            psis[key] = psir;
            mus[key] = spot_mu(m, sd, *sh, deg);
        }

        // pass 2: theorem identities per spot
        std::vector<MFLSpot> row;
        for (const auto& [key, sd] : pd.spots) {
            const PageSpot* sh = ph.spot(key.first, key.second);
            if (sd.E.dim() == 0 && sh->E.dim() == 0)
                continue;
            MFLSpot spot;
            spot.r = r;
            spot.i = key.first;
            spot.j = key.second;
            spot.psi_r = psis[key];
            bool invertible = (sd.E.dim() == sh->E.dim()) &&
                              rank_of(spot.psi_r) == sd.E.dim();

            spot.filtrations_coincide = true;
            for (int t = 0; t < levels; ++t)
                if (!(sd.Fd[t] == sd.Frec[t] && sd.Frec[t] == sd.Fdstar[t]))
                    spot.filtrations_coincide = false;
            bool mu_ok = mus[key].has_value();
            spot.mu = mu_ok ? *mus[key] : MatF::Zero(sh->E.dim(), sd.E.dim());
            mu_ok = mu_ok && sh->E.dim() == sd.E.dim() &&
                    rank_of(spot.mu) == sd.E.dim();

            auto tkey = std::make_pair(spot.i + r, spot.j - r + 1);
            const PageSpot* td = pd.spot(tkey.first, tkey.second);
            const PageSpot* th = ph.spot(tkey.first, tkey.second);

            // psi_r intertwines d_r
            if (td && th && td->E.dim() > 0) {
                spot.intertwines =
                    mat_equal(psis[tkey] * sh->d, sd.d * spot.psi_r);
            } else {
                spot.intertwines = true;
            }

            // strictness of d_r for Fil_rec
            if (td && td->E.dim() > 0 && sd.E.dim() > 0) {
                Flag fs, fd;
                fs.increasing = fd.increasing = false;
                fs.ambient = sd.E.dim();
                fd.ambient = td->E.dim();
                for (int t = 0; t < levels; ++t) {
                    fs.steps.push_back(sd.Frec[t]);
                    fd.steps.push_back(td->Frec[t]);
                }
                spot.d_strict = strictness_check(sd.d, fs, fd).pass;
            } else {
                spot.d_strict = true;
            }

            // mu commutes: mu_target Gr(d_{r,dR}) = d_{r,hig} mu_src
            spot.mu_commutes = mu_ok;
            if (mu_ok && td && th && td->E.dim() > 0) {
                if (mus[tkey]) {
                    MatF grd = spot_gr_d(sd, *td);
                    spot.mu_commutes =
                        mat_equal(*mus[tkey] * grd, sh->d * spot.mu);
                } else {
                    spot.mu_commutes = false;
                }
            }

            if (invertible && mu_ok && sd.E.dim() > 0) {
                Flag f;
                f.increasing = false;
                f.ambient = sd.E.dim();
                for (int t = 0; t < levels; ++t)
                    f.steps.push_back(sd.Frec[t]);
                spot.module = make_fl_module(f, spot.psi_r * spot.mu);
            }
            if (!(invertible && spot.intertwines &&
                  spot.filtrations_coincide && spot.d_strict &&
                  spot.mu_commutes))
                out.all_pass = false;
            row.push_back(std::move(spot));
        }
        out.spots.push_back(std::move(row));
    }
    return out;
}

FLModule fl_structure_on_h(const MFLComplex& m, int mdeg)
{
    // E_1 degeneration of the Fil spectral sequence
    SpectralSequence fil_ss(m.dR, SpectralSequence::Along::Fil, false);
    fil_ss.run();
    LF_CHECK(fil_ss.degeneration_radius() <= 1, "NoDegeneration",
             "Hodge spectral sequence does not degenerate at E_1");

    int deg = mdeg;
    int dim = m.dR.dim_at(deg);
    Subspace ker = rank_kernel_image(m.dR.d_from(deg)).kernel;
    Subspace im = (m.dR.dim_at(deg - 1) == 0)
                      ? Subspace::zero(dim)
                      : rank_kernel_image(m.dR.d_from(deg - 1)).image;
    Quotient h(ker, im);

    Flag fil;
    fil.increasing = false;
    fil.ambient = h.dim();
    int levels = m.dR.f_hi - m.dR.f_lo + 2;
    auto project_span = [&](const Subspace& sub) {
        std::vector<RowF> rows;
        for (int b = 0; b < sub.dim(); ++b)
            rows.push_back(
                h.project(sub.basis().row(b).transpose()).transpose());
        MatF mm(static_cast<int>(rows.size()), h.dim());
        for (size_t x = 0; x < rows.size(); ++x)
            mm.row(static_cast<int>(x)) = rows[x];
        return Subspace::span_rows(mm, h.dim());
    };
    for (int t = 0; t < levels; ++t) {
        int l = m.dR.f_lo + t;
        fil.steps.push_back(
            project_span(m.dR.fil_step(deg, l).intersect(ker)));
    }

    // psi: Gr_Fil H -> H via graded projections of filtered cocycle
    // representatives
    MatF psi = MatF::Zero(h.dim(), h.dim());
    int col0 = 0;
    Subspace kerh = rank_kernel_image(m.hig.d_from(deg)).kernel;
    Subspace imh = (m.hig.dim_at(deg - 1) == 0)
                       ? Subspace::zero(dim)
                       : rank_kernel_image(m.hig.d_from(deg - 1)).image;
    Quotient hh(kerh, imh);
    for (int t = 0; t + 1 < levels; ++t) {
        int l = m.dR.f_lo + t;
        int grdim = fil.steps[t].dim() - fil.steps[t + 1].dim();
        if (grdim == 0)
            continue;
        Subspace sl = m.dR.fil_step(deg, l).intersect(ker);
        Subspace grown = fil.steps[t + 1];
        Quotient grq(fil.steps[t], fil.steps[t + 1]);
        MatF images(h.dim(), grdim);
        MatF trans(grdim, grdim);
        int picked = 0;
        for (int b = 0; b < sl.dim() && picked < grdim; ++b) {
            VecF v = sl.basis().row(b).transpose();
            VecF cls = h.project(v);
            if (grown.contains(cls))
                continue;
            grown = grown.sum(
                Subspace::span_rows(cls.transpose(), h.dim()));
            VecF proj = graded_projection(m.dR, deg, l, v);
            LF_ASSERT(kerh.contains(proj),
                      "graded projection is not a Higgs cocycle");
            VecF hcls = hh.project(proj);
            // psi on H of the graded complex
            size_t kk = static_cast<size_t>(deg - m.dR.deg_lo);
            VecF img = m.psi[kk] * hh.lift(hcls);
            LF_ASSERT(ker.contains(img), "psi image is not a cocycle");
            images.col(picked) = h.project(img);
            trans.col(picked) = grq.project(cls);
            ++picked;
        }
        LF_CHECK(picked == grdim, "NoDegeneration",
                 "filtered cocycle representatives incomplete");
        MatF block = images * invert(trans);
        for (int b = 0; b < grdim; ++b)
            psi.col(col0 + b) = block.col(b);
        col0 += grdim;
    }
    return make_fl_module(fil, psi);
}

} // namespace logfrob
