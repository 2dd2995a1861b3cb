#include "logfrob/flmod.hpp"

#include "logfrob/error.hpp"

namespace logfrob {

Quotient FLModule::gr_level(int l) const
{
    LF_ASSERT(l >= 0 && l + 1 < static_cast<int>(fil.steps.size()),
              "gr level out of range");
    return Quotient(fil.steps[l], fil.steps[l + 1]);
}

FLModule make_fl_module(Flag fil, MatF psi)
{
    FLModule m;
    LF_ASSERT(!fil.steps.empty(), "empty filtration");
    m.dim = fil.steps[0].ambient();
    m.fil = std::move(fil);
    m.fil.increasing = false;
    m.fil.ambient = m.dim;
    m.fil.validate_chain();
    LF_ASSERT(m.fil.steps.front().dim() == m.dim &&
                  m.fil.steps.back().dim() == 0,
              "filtration must run from full to zero");
    for (size_t l = 0; l + 1 < m.fil.steps.size(); ++l)
        m.gr_dims.push_back(m.fil.steps[l].dim() -
                            m.fil.steps[l + 1].dim());
    m.psi = std::move(psi);
    LF_ASSERT(m.psi.rows() == m.dim && m.psi.cols() == m.dim,
              "psi must be square of the module dimension");
    return m;
}

bool fl_validate(const FLModule& m)
{
    if (m.psi.rows() != m.dim || m.psi.cols() != m.dim)
        return false;
    int total = 0;
    for (int g : m.gr_dims)
        total += g;
    if (total != m.dim)
        return false;
    return rank_of(m.psi) == m.dim;
}

StrictnessResult strictness_check(const MatF& f, const Flag& src,
                                  const Flag& dst)
{
    StrictnessResult out;
    Subspace image = Subspace::full(src.ambient).image_under(f);
    size_t levels = std::max(src.steps.size(), dst.steps.size());
    auto src_step = [&](size_t l) {
        return l < src.steps.size() ? src.steps[l] : src.steps.back();
    };
    auto dst_step = [&](size_t l) {
        return l < dst.steps.size() ? dst.steps[l] : dst.steps.back();
    };
    for (size_t l = 0; l < levels; ++l) {
        Subspace lhs = src_step(l).image_under(f);
        Subspace rhs = image.intersect(dst_step(l));
        if (lhs == rhs)
            continue;
        LF_ASSERT(rhs.contains(lhs), "strictness: image escapes filtration");
        out.pass = false;
        out.level = static_cast<int>(l);
        for (int b = 0; b < rhs.dim(); ++b) {
            VecF v = rhs.basis().row(b).transpose();
            if (!lhs.contains(v)) {
                out.witness = v;
                break;
            }
        }
        return out;
    }
    return out;
}

MatF gr_matrix(const MatF& f, const FLModule& src, const FLModule& dst)
{
    size_t levels = std::max(src.fil.steps.size(), dst.fil.steps.size());
    auto sstep = [&](size_t l) {
        return l < src.fil.steps.size() ? src.fil.steps[l]
                                        : src.fil.steps.back();
    };
    auto dstep = [&](size_t l) {
        return l < dst.fil.steps.size() ? dst.fil.steps[l]
                                        : dst.fil.steps.back();
    };
    for (size_t l = 0; l < levels; ++l)
        LF_CHECK(dstep(l).contains(sstep(l).image_under(f)), "NotCompatible",
                 "map is not filtered at level " + std::to_string(l));

    int sdim = src.dim, ddim = dst.dim;
    MatF out = MatF::Zero(ddim, sdim);
    int col0 = 0;
    for (size_t l = 0; l + 1 < src.fil.steps.size(); ++l) {
        Quotient qs = src.gr_level(static_cast<int>(l));
        Quotient qd = dst.gr_level(
            std::min(l, dst.fil.steps.size() - 2));
        // graded piece of f at level l
        int row0 = 0;
        for (size_t t = 0; t < l && t + 1 < dst.fil.steps.size(); ++t)
            row0 += dst.gr_dims[t];
        bool dst_has_level = l + 1 < dst.fil.steps.size();
        for (int b = 0; b < qs.dim(); ++b) {
            VecF img = f * qs.reps().row(b).transpose();
            if (!dst_has_level) {
                // f(Fil^l) must sit in the zero tail
                LF_ASSERT(dst.fil.steps.back().contains(img),
                          "graded image escapes the destination flag");
                continue;
            }
            VecF coords = qd.project(img);
            for (int x = 0; x < coords.size(); ++x)
                out(row0 + x, col0 + b) = coords(x);
        }
        col0 += qs.dim();
    }
    return out;
}

void check_fl_morphism(const MatF& f, const FLModule& src,
                       const FLModule& dst)
{
    LF_CHECK(f.rows() == dst.dim && f.cols() == src.dim, "NotAnFLMorphism",
             "shape mismatch");
    MatF gr;
    try {
        gr = gr_matrix(f, src, dst);
    } catch (const Error&) {
        fail("NotAnFLMorphism", "map is not filtered");
    }
    if (!mat_equal(f * src.psi, dst.psi * gr))
        fail("NotAnFLMorphism",
             "map does not intertwine the graded isomorphisms");
}

std::pair<FLModule, FLModule> kernel_cokernel(const MatF& f,
                                              const FLModule& src,
                                              const FLModule& dst)
{
    check_fl_morphism(f, src, dst);
    StrictnessResult strict = strictness_check(f, src.fil, dst.fil);
    LF_ASSERT(strict.pass,
              "FL morphism failed strictness, contradicting Faltings");

    // ---- kernel
    Subspace ker = rank_kernel_image(f).kernel;
    int kd = ker.dim();
    Flag kfil;
    kfil.increasing = false;
    kfil.ambient = kd;
    std::vector<Quotient> kgr;
    for (size_t l = 0; l < src.fil.steps.size(); ++l) {
        Subspace cut = src.fil.steps[l].intersect(ker);
        // coordinates w.r.t. the kernel basis
        MatF rows(cut.dim(), kd);
        for (int b = 0; b < cut.dim(); ++b)
            rows.row(b) =
                ker.coords_of(cut.basis().row(b).transpose()).transpose();
        kfil.steps.push_back(Subspace::span_rows(rows, kd));
    }
    // psi on the kernel: embed a graded class of the kernel into the graded
    // space of the source and apply src.psi
    MatF kpsi = MatF::Zero(kd, kd);
    {
        int col0 = 0;
        for (size_t l = 0; l + 1 < kfil.steps.size(); ++l) {
            Quotient q(kfil.steps[l], kfil.steps[l + 1]);
            Quotient qsrc = src.gr_level(static_cast<int>(l));
            int src_off = 0;
            for (size_t t = 0; t < l; ++t)
                src_off += src.gr_dims[t];
            for (int b = 0; b < q.dim(); ++b) {
                // kernel coords -> ambient source vector
                VecF amb = VecF::Zero(src.dim);
                VecF rep = q.reps().row(b).transpose();
                for (int x = 0; x < kd; ++x)
                    amb += rep(x) * ker.basis().row(x).transpose();
                VecF grc = qsrc.project(amb);
                VecF emb = VecF::Zero(src.dim);
                for (int x = 0; x < grc.size(); ++x)
                    emb(src_off + x) = grc(x);
                VecF img = src.psi * emb;
                LF_ASSERT(ker.contains(img),
                          "psi does not preserve the kernel");
                kpsi.col(col0 + b) = ker.coords_of(img);
            }
            col0 += q.dim();
        }
    }
    FLModule kernel = make_fl_module(kfil, kpsi);

    // ---- cokernel
    Subspace image = Subspace::full(src.dim).image_under(f);
    Quotient coker(Subspace::full(dst.dim), image);
    int cd = coker.dim();
    Flag cfil;
    cfil.increasing = false;
    cfil.ambient = cd;
    for (size_t l = 0; l < dst.fil.steps.size(); ++l) {
        MatF rows(dst.fil.steps[l].dim(), cd);
        for (int b = 0; b < dst.fil.steps[l].dim(); ++b)
            rows.row(b) =
                coker
                    .project(dst.fil.steps[l].basis().row(b).transpose())
                    .transpose();
        cfil.steps.push_back(Subspace::span_rows(rows, cd));
    }
    MatF cpsi = MatF::Zero(cd, cd);
    {
        int col0 = 0;
        for (size_t l = 0; l + 1 < cfil.steps.size(); ++l) {
            Quotient q(cfil.steps[l], cfil.steps[l + 1]);
            if (q.dim() == 0)
                continue;
            Quotient qdst = dst.gr_level(static_cast<int>(l));
            int dst_off = 0;
            for (size_t t = 0; t < l; ++t)
                dst_off += dst.gr_dims[t];
            // representatives inside Fil^l(dst) mapping onto the graded
            // piece of the cokernel; strictness makes the choice immaterial
            Subspace fill = dst.fil.steps[l];
            Subspace grown = cfil.steps[l + 1];
            std::vector<VecF> reps;
            for (int b = 0; b < fill.dim() &&
                            static_cast<int>(reps.size()) < q.dim();
                 ++b) {
                VecF v = fill.basis().row(b).transpose();
                VecF cls = coker.project(v);
                if (grown.contains(cls))
                    continue;
                grown = grown.sum(
                    Subspace::span_rows(cls.transpose(), cd));
                reps.push_back(v);
            }
            LF_ASSERT(static_cast<int>(reps.size()) == q.dim(),
                      "cokernel graded representatives incomplete");
            // images of the picked graded classes under psi, and the
            // transition from the picked classes to the canonical Gr basis
            MatF images(cd, q.dim());
            MatF transition(q.dim(), q.dim());
            for (size_t b = 0; b < reps.size(); ++b) {
                VecF grc = qdst.project(reps[b]);
                VecF emb = VecF::Zero(dst.dim);
                for (int x = 0; x < grc.size(); ++x)
                    emb(dst_off + x) = grc(x);
                images.col(static_cast<int>(b)) =
                    coker.project(dst.psi * emb);
                transition.col(static_cast<int>(b)) =
                    q.project(coker.project(reps[b]));
            }
            MatF block = images * invert(transition);
            for (int b = 0; b < q.dim(); ++b)
                cpsi.col(col0 + b) = block.col(b);
            col0 += q.dim();
        }
    }
    FLModule cokernel = make_fl_module(cfil, cpsi);
    return {kernel, cokernel};
}

} // namespace logfrob
