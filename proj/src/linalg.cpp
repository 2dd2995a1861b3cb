#include "logfrob/linalg.hpp"

#include <algorithm>

#include "logfrob/error.hpp"

namespace logfrob {

bool mat_equal(const MatF& a, const MatF& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        return false;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (a(i, j) != b(i, j))
                return false;
    return true;
}

bool is_zero(const MatF& a)
{
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_zero())
                return false;
    return true;
}

int row_reduce(MatF& a)
{
    const Eigen::Index rows = a.rows(), cols = a.cols();
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
        Eigen::Index piv = -1;
        for (Eigen::Index i = r; i < rows; ++i) {
            if (!a(i, c).is_zero()) {
                piv = i;
                break;
            }
        }
        if (piv < 0)
            continue;
        if (piv != r)
            a.row(piv).swap(a.row(r));
        Fp inv = a(r, c).inv();
        for (Eigen::Index j = c; j < cols; ++j)
            a(r, j) *= inv;
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (i == r || a(i, c).is_zero())
                continue;
            Fp f = a(i, c);
            for (Eigen::Index j = c; j < cols; ++j)
                a(i, j) -= f * a(r, j);
        }
        ++r;
    }
    return static_cast<int>(r);
}

int rank_of(const MatF& a)
{
    MatF copy = a;
    return row_reduce(copy);
}

std::optional<VecF> solve(const MatF& a, const VecF& b)
{
    LF_ASSERT(a.rows() == b.rows(), "solve: dimension mismatch");
    MatF aug(a.rows(), a.cols() + 1);
    aug.leftCols(a.cols()) = a;
    aug.col(a.cols()) = b;
    row_reduce(aug);
    VecF x = VecF::Zero(a.cols());
    for (Eigen::Index i = 0; i < aug.rows(); ++i) {
        Eigen::Index lead = -1;
        for (Eigen::Index j = 0; j < aug.cols(); ++j) {
            if (!aug(i, j).is_zero()) {
                lead = j;
                break;
            }
        }
        if (lead < 0)
            continue;
        if (lead == a.cols())
            return std::nullopt; // 0 = nonzero row
        x(lead) = aug(i, a.cols());
    }
    return x;
}

MatF invert(const MatF& a)
{
    LF_ASSERT(a.rows() == a.cols(), "invert: matrix not square");
    int n = static_cast<int>(a.rows());
    LF_CHECK(rank_of(a) == n, "NotInvertible", "matrix is singular");
    MatF aug(n, 2 * n);
    aug.leftCols(n) = a;
    aug.rightCols(n) = MatF::Identity(n, n);
    row_reduce(aug);
    return aug.rightCols(n);
}

Subspace Subspace::zero(int ambient)
{
    Subspace s;
    s.ambient_ = ambient;
    s.basis_ = MatF(0, ambient);
    return s;
}

Subspace Subspace::full(int ambient)
{
    Subspace s;
    s.ambient_ = ambient;
    s.basis_ = MatF::Identity(ambient, ambient);
    return s;
}

Subspace Subspace::span_rows(const MatF& rows, int ambient)
{
    LF_ASSERT(rows.cols() == ambient || rows.rows() == 0,
              "span_rows: ambient mismatch");
    MatF work = rows;
    if (work.cols() != ambient)
        work = MatF(0, ambient);
    int r = row_reduce(work);
    Subspace s;
    s.ambient_ = ambient;
    s.basis_ = work.topRows(r);
    return s;
}

Subspace Subspace::span_cols(const MatF& cols)
{
    return span_rows(cols.transpose(), static_cast<int>(cols.rows()));
}

bool Subspace::contains(const VecF& v) const
{
    VecF r = reduce(v);
    for (Eigen::Index i = 0; i < r.rows(); ++i)
        if (!r(i).is_zero())
            return false;
    return true;
}

bool Subspace::contains(const Subspace& other) const
{
    LF_ASSERT(ambient_ == other.ambient_, "contains: ambient mismatch");
    for (int i = 0; i < other.dim(); ++i)
        if (!contains(other.basis_.row(i).transpose()))
            return false;
    return true;
}

bool Subspace::operator==(const Subspace& o) const
{
    return ambient_ == o.ambient_ && mat_equal(basis_, o.basis_);
}

Subspace Subspace::sum(const Subspace& o) const
{
    LF_ASSERT(ambient_ == o.ambient_, "sum: ambient mismatch");
    MatF rows(dim() + o.dim(), ambient_);
    rows.topRows(dim()) = basis_;
    rows.bottomRows(o.dim()) = o.basis_;
    return span_rows(rows, ambient_);
}

Subspace Subspace::intersect(const Subspace& o) const
{
    LF_ASSERT(ambient_ == o.ambient_, "intersect: ambient mismatch");
    // Kernel trick on the concatenated spanning sets: combinations of our
    // basis rows that also lie in o.
    if (dim() == 0 || o.dim() == 0)
        return zero(ambient_);
    MatF stacked(dim() + o.dim(), ambient_);
    stacked.topRows(dim()) = basis_;
    stacked.bottomRows(o.dim()) = o.basis_;
    RankKernelImage rki = rank_kernel_image(stacked.transpose());
    // kernel vectors (c, d) with c^T basis + d^T o.basis = 0, so c^T basis
    // spans the intersection
    MatF rows(rki.kernel.dim(), ambient_);
    for (int i = 0; i < rki.kernel.dim(); ++i) {
        VecF cd = rki.kernel.basis().row(i).transpose();
        RowF v = RowF::Zero(ambient_);
        for (int j = 0; j < dim(); ++j)
            v += cd(j) * basis_.row(j);
        rows.row(i) = v;
    }
    return span_rows(rows, ambient_);
}

Subspace Subspace::image_under(const MatF& a) const
{
    LF_ASSERT(a.cols() == ambient_, "image_under: shape mismatch");
    MatF rows = basis_ * a.transpose(); // (dim x ambient_dst)
    return span_rows(rows, static_cast<int>(a.rows()));
}

Subspace Subspace::preimage_under(const MatF& a, int ambient_src) const
{
    LF_ASSERT(a.cols() == ambient_src && a.rows() == ambient_,
              "preimage_under: shape mismatch");
    // x with a x in this  <=>  q a x = 0 where rows of q cut this out.
    // Build q from a complement: v in this iff reduce(v) == 0, which is
    // linear; use the rows of (I - proj) style elimination instead: stack
    // basis and solve. Simpler: kernel of the composite with the quotient
    // projection by this.
    Quotient q(Subspace::full(ambient_), *this);
    if (q.dim() == 0)
        return Subspace::full(ambient_src);
    MatF comp(q.dim(), ambient_src);
    for (int j = 0; j < ambient_src; ++j) {
        VecF col = a.col(j);
        comp.col(j) = q.project(col);
    }
    return rank_kernel_image(comp).kernel;
}

VecF Subspace::reduce(const VecF& v) const
{
    LF_ASSERT(v.rows() == ambient_, "reduce: ambient mismatch");
    VecF r = v;
    for (int i = 0; i < dim(); ++i) {
        Eigen::Index piv = -1;
        for (Eigen::Index j = 0; j < ambient_; ++j) {
            if (!basis_(i, j).is_zero()) {
                piv = j;
                break;
            }
        }
        LF_ASSERT(piv >= 0, "zero basis row");
        Fp f = r(piv);
        if (!f.is_zero())
            r -= f * basis_.row(i).transpose();
    }
    return r;
}

VecF Subspace::coords_of(const VecF& v) const
{
    VecF r = v;
    VecF coords = VecF::Zero(dim());
    for (int i = 0; i < dim(); ++i) {
        Eigen::Index piv = -1;
        for (Eigen::Index j = 0; j < ambient_; ++j) {
            if (!basis_(i, j).is_zero()) {
                piv = j;
                break;
            }
        }
        Fp f = r(piv);
        coords(i) = f;
        if (!f.is_zero())
            r -= f * basis_.row(i).transpose();
    }
    for (Eigen::Index j = 0; j < ambient_; ++j)
        LF_ASSERT(r(j).is_zero(), "coords_of: vector not in subspace");
    return coords;
}

RankKernelImage rank_kernel_image(const MatF& a)
{
    const int rows = static_cast<int>(a.rows());
    const int cols = static_cast<int>(a.cols());
    MatF work = a;
    int rank = row_reduce(work);

    // pivot columns
    std::vector<int> pivots;
    std::vector<bool> is_pivot(cols, false);
    for (int i = 0; i < rank; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (!work(i, j).is_zero()) {
                pivots.push_back(j);
                is_pivot[j] = true;
                break;
            }
        }
    }
    // kernel: one vector per free column
    MatF ker(cols - rank, cols);
    int kr = 0;
    for (int j = 0; j < cols; ++j) {
        if (is_pivot[j])
            continue;
        RowF v = RowF::Zero(cols);
        v(j) = Fp(1);
        for (int i = 0; i < rank; ++i)
            v(pivots[i]) = -work(i, j);
        ker.row(kr++) = v;
    }
    RankKernelImage out;
    out.rank = rank;
    out.kernel = Subspace::span_rows(ker, cols);
    out.image = Subspace::span_rows(a.transpose(), rows);
    return out;
}

Quotient::Quotient(Subspace big, Subspace small)
    : big_(std::move(big)), small_(std::move(small))
{
    LF_ASSERT(big_.ambient() == small_.ambient(), "quotient: ambient mismatch");
    LF_ASSERT(big_.contains(small_), "quotient: small not inside big");
    // pivots of small
    std::vector<bool> small_piv(big_.ambient(), false);
    for (int i = 0; i < small_.dim(); ++i)
        for (int j = 0; j < small_.ambient(); ++j)
            if (!small_.basis()(i, j).is_zero()) {
                small_piv[j] = true;
                break;
            }
    MatF reps(big_.dim() - small_.dim(), big_.ambient());
    int r = 0;
    for (int i = 0; i < big_.dim(); ++i) {
        int piv = -1;
        for (int j = 0; j < big_.ambient(); ++j)
            if (!big_.basis()(i, j).is_zero()) {
                piv = j;
                break;
            }
        if (small_piv[piv])
            continue;
        VecF v = small_.reduce(big_.basis().row(i).transpose());
        reps.row(r) = v.transpose();
        pivots_.push_back(piv);
        ++r;
    }
    LF_ASSERT(r == reps.rows(), "quotient: rep extraction mismatch");
    reps_ = reps;
}

VecF Quotient::project(const VecF& v) const
{
    VecF r = small_.reduce(v);
    VecF coords = VecF::Zero(dim());
    for (int i = 0; i < dim(); ++i) {
        Fp f = r(pivots_[i]);
        coords(i) = f;
        if (!f.is_zero())
            r -= f * reps_.row(i).transpose();
    }
    for (Eigen::Index j = 0; j < r.rows(); ++j)
        LF_ASSERT(r(j).is_zero(), "project: vector not in big subspace");
    return coords;
}

VecF Quotient::lift(const VecF& c) const
{
    LF_ASSERT(c.rows() == dim(), "lift: coordinate size mismatch");
    VecF v = VecF::Zero(big_.ambient());
    for (int i = 0; i < dim(); ++i)
        v += c(i) * reps_.row(i).transpose();
    return v;
}

MatF subquotient_map(const MatF& a, const SubquotientPair& src,
                     const SubquotientPair& dst)
{
    Subspace big_img = src.big.image_under(a);
    Subspace small_img = src.small.image_under(a);
    LF_CHECK(dst.big.contains(big_img), "NotCompatible",
             "map does not send source big space into destination big space");
    LF_CHECK(dst.small.contains(small_img), "NotCompatible",
             "map does not send source small space into destination small "
             "space");
    Quotient qs(src.big, src.small);
    Quotient qd(dst.big, dst.small);
    MatF out(qd.dim(), qs.dim());
    for (int j = 0; j < qs.dim(); ++j) {
        VecF rep = qs.reps().row(j).transpose();
        out.col(j) = qd.project(a * rep);
    }
    return out;
}

void Flag::validate_chain() const
{
    for (size_t k = 0; k + 1 < steps.size(); ++k) {
        bool ok = increasing ? steps[k + 1].contains(steps[k])
                             : steps[k].contains(steps[k + 1]);
        LF_CHECK(ok, "Internal", "flag inclusion chain broken");
    }
}

} // namespace logfrob
