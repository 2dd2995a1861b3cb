// Monomial logarithmic forms in character-graded normal form. A term is
// coeff * x^m (x) w with w a wedge-basis element of Lambda(M (x) F_p); the
// differential is d(x^m (x) w) = x^m (x) (mbar ^ w) with mbar = m mod p.
// Poincare residues strip dlog factors by iterated contraction with the
// divisor rays, in increasing ray order.

#ifndef LOGFROB_FORMS_HPP
#define LOGFROB_FORMS_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "logfrob/toric.hpp"

namespace logfrob {

using Weight = std::vector<int64_t>;

Weight to_weight(const IVec& m);
IVec to_ivec(const Weight& m);
Weight add_weights(const Weight& a, const Weight& b);
Weight scale_weight(const Weight& a, int64_t c);

struct MonoKey {
    Weight m;
    uint32_t wedge; // bitmask

    bool operator<(const MonoKey& o) const
    {
        if (m != o.m)
            return m < o.m;
        return wedge < o.wedge;
    }
    bool operator==(const MonoKey& o) const
    {
        return m == o.m && wedge == o.wedge;
    }
};

class FormSum {
  public:
    explicit FormSum(int n = 0) : n_(n) {}
    static FormSum monomial(int n, const Weight& m, uint32_t wedge, Fp c);
    // degree-0 constant
    static FormSum constant(int n, Fp c);

    int n() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<MonoKey, Fp>& terms() const { return terms_; }

    void add_term(const Weight& m, uint32_t wedge, Fp c);
    FormSum operator+(const FormSum& o) const;
    FormSum operator-(const FormSum& o) const;
    FormSum operator*(Fp c) const;
    bool operator==(const FormSum& o) const;

    // exterior derivative
    FormSum d() const;
    FormSum wedge(const FormSum& o) const;
    FormSum contract(const IVec& rho) const;

    // keep only terms of the given wedge degree / weight
    FormSum component(int degree) const;
    FormSum component_weight(const Weight& m) const;
    std::vector<Weight> weights() const;

    // monomial substitution along an integer map of character lattices
    // (m -> A m on weights, Lambda(A mod p) on wedges)
    FormSum pullback(const IMat& a) const;

    // multiply by x^m
    FormSum shift_weight(const Weight& m) const;

  private:
    int n_;
    std::map<MonoKey, Fp> terms_;
};

// Per-weight view of a form sum as a vector in Lambda^i coordinates.
VecF wedge_vector(const FormSum& f, const Weight& m, int n, int degree);
FormSum from_wedge_vector(const VecF& v, const Weight& m, int n, int degree);

// ---- residues ------------------------------------------------------------

// Lattice basis of the annihilator M cap I^perp for the rays with the given
// ids in the context; rows are the basis vectors (integer kernel, HNF-like
// canonical form).
IMat annihilator_basis(const ChartContext& ctx, const std::vector<int>& ray_ids);

struct ResidueTarget {
    ChartContext quotient_ctx; // rays of ctx minus I, pushed to the quotient
    IMat basis;                // rows: Z-basis of M cap I^perp
};

ResidueTarget residue_target(const ChartContext& ctx,
                             const std::vector<int>& ray_ids);

// Poincare residue Res_{D_I} of a weight-graded form on the chart; I is the
// sorted list of global ray ids, contracted left to right in increasing ray
// order. The operator is the total one (targets may keep log poles along
// the remaining divisor); with enforce_level set it restricts to the
// W_{|I|} domain, whose image consists of plain forms, and throws
// Error("NotInWeightLevel") outside it. Error("BadFace") when I is not a
// subset of the chart's divisor rays.
FormSum residue(const ChartContext& ctx, const FormSum& omega,
                const std::vector<int>& ray_ids,
                bool enforce_level = false);

// Matrix of the direct sum of residues on the weight-m slice of
// Gr^W_l Omega^i(log D): rows run over the D_I form slices (I in lex order
// over l-subsets of the chart's divisor rays annihilating m), columns over
// the canonical Gr^W_l basis. Certified bijective, else
// Error("DecompositionFailure").
struct GrDecomposition {
    Quotient source;                 // W_l / W_{l-1} slice
    std::vector<std::vector<int>> strata; // the ray-id sets I
    std::vector<int> target_dims;
    MatF matrix;
};

GrDecomposition gr_weight_decompose(const ChartContext& ctx, const IVec& m,
                                    int i, int l);

} // namespace logfrob

#endif
