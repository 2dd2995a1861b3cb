// Deterministic exact linear algebra over F_p: reduced echelon forms,
// kernels/images, a canonical Subspace type, flags, and induced maps on
// subquotients. Every basis produced here is the row-reduced echelon basis,
// so equal subspaces have equal matrices and all reports are reproducible.

#ifndef LOGFROB_LINALG_HPP
#define LOGFROB_LINALG_HPP

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "logfrob/fp.hpp"

namespace logfrob {

using MatF = Eigen::Matrix<Fp, Eigen::Dynamic, Eigen::Dynamic>;
using VecF = Eigen::Matrix<Fp, Eigen::Dynamic, 1>;
using RowF = Eigen::Matrix<Fp, 1, Eigen::Dynamic>;

bool mat_equal(const MatF& a, const MatF& b);
bool is_zero(const MatF& a);

// In-place reduction to reduced row echelon form; returns the rank.
// Pivots are the first nonzero entry scanning left to right, rows in pivot
// order; no pivoting heuristics, so the result is unique.
int row_reduce(MatF& a);

int rank_of(const MatF& a);

// Solve a * x = b; nullopt when inconsistent. The solution is the canonical
// one with zero entries at the non-pivot columns.
std::optional<VecF> solve(const MatF& a, const VecF& b);

// Exact inverse of a square invertible matrix; throws on singular input.
MatF invert(const MatF& a);

class Subspace {
  public:
    Subspace() : ambient_(0) {}
    static Subspace zero(int ambient);
    static Subspace full(int ambient);
    // Rows span the subspace; they get reduced to the canonical basis.
    static Subspace span_rows(const MatF& rows, int ambient);
    static Subspace span_cols(const MatF& cols);

    int dim() const { return static_cast<int>(basis_.rows()); }
    int ambient() const { return ambient_; }
    const MatF& basis() const { return basis_; } // rows, RREF

    bool contains(const VecF& v) const;
    bool contains(const Subspace& other) const;
    bool operator==(const Subspace& o) const;

    Subspace sum(const Subspace& o) const;
    Subspace intersect(const Subspace& o) const;

    // Image a * this (columns convention: vectors are columns, a is
    // rows(a) x ambient()).
    Subspace image_under(const MatF& a) const;
    // {x : a x in this}, a maps ambient_src -> ambient().
    Subspace preimage_under(const MatF& a, int ambient_src) const;

    // Coordinates of v in the echelon basis; v must be a member.
    VecF coords_of(const VecF& v) const;

    // Residue of v after reducing by the basis (zero iff contained).
    VecF reduce(const VecF& v) const;

  private:
    int ambient_;
    MatF basis_;
};

struct RankKernelImage {
    int rank;
    Subspace kernel; // subspace of the domain F_p^cols
    Subspace image;  // subspace of the codomain F_p^rows, spanned by columns
};

RankKernelImage rank_kernel_image(const MatF& a);

// Canonical basis data for big/small. Representatives are rows of big's
// echelon basis whose pivots are not pivots of small, reduced modulo small.
class Quotient {
  public:
    Quotient() = default;
    Quotient(Subspace big, Subspace small);

    int dim() const { return static_cast<int>(reps_.rows()); }
    const Subspace& big() const { return big_; }
    const Subspace& small() const { return small_; }
    const MatF& reps() const { return reps_; } // rows are representatives

    // v must lie in big; returns coordinates of [v] in the quotient basis.
    VecF project(const VecF& v) const;
    // Representative of coordinate vector c.
    VecF lift(const VecF& c) const;

  private:
    Subspace big_, small_;
    MatF reps_;
    std::vector<int> pivots_; // pivot column of each representative
};

struct SubquotientPair {
    Subspace big;
    Subspace small; // must be contained in big
};

// Matrix of the map induced by a on src.big/src.small -> dst.big/dst.small.
// Throws Error("NotCompatible") when a does not map the pair into the pair.
MatF subquotient_map(const MatF& a, const SubquotientPair& src,
                     const SubquotientPair& dst);

// An increasing or decreasing chain of subspaces of a fixed ambient space.
// steps[k] is the k-th filtration step; increasing means steps[k] contains
// steps[k-1].
struct Flag {
    bool increasing = true;
    int ambient = 0;
    std::vector<Subspace> steps;

    void validate_chain() const; // throws on a broken inclusion chain
};

} // namespace logfrob

#endif
