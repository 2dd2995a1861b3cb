// Frobenius liftings to Z/p^2 and the splitting machinery built from them:
// the per-chart one-form splittings zeta_alpha, the transition functions
// h_{alpha beta}, the full splitting map phi (cup products of phi^1 composed
// with the antisymmetrization delta_i), the induced isomorphism psi on
// hypercohomology, and the chain homotopies eta for functoriality and
// lifting independence.
//
// Lifting data is stored as mod-p perturbations of the monomial lifting:
// F(t) = t^p (1 + p u) for a divisor coordinate and F(t) = t^p + p lambda
// otherwise. The divided parts u, lambda are all zeta/h ever see; Z/p^2
// arithmetic appears only in the validation oracle.

#ifndef LOGFROB_FROBSPLIT_HPP
#define LOGFROB_FROBSPLIT_HPP

#include <map>
#include <vector>

#include "logfrob/cech.hpp"

namespace logfrob {

struct FrobLift {
    // per chart, per local ray index: the perturbation polynomial (a
    // degree-0 FormSum); missing entries mean zero (the monomial lifting)
    std::vector<std::map<int, FormSum>> charts;

    static FrobLift canonical(const Atlas& atlas);
};

// Checks that every perturbation is a regular function on its chart and
// that the divided-part encoding agrees with a direct Z/p^2 expansion of
// the lifted Frobenius on a sample of monomials. Throws
// Error("NotRegular").
void validate_lift(const Atlas& atlas, const FrobLift& lift);

class SplitData {
  public:
    SplitData(const Atlas& atlas, const FrobLift& lift);

    const Atlas& atlas() const { return *atlas_; }

    // zeta_alpha on a one-form; O-linear over p-th powers:
    // zeta(x^m w) = x^{pm} (w + d Ebar(w)).
    FormSum zeta(int chart, const FormSum& one_form) const;

    // h_{alpha beta} on a one-form: x^{pm} (Ebar_beta - Ebar_alpha)(w).
    FormSum h(int chart_a, int chart_b, const FormSum& one_form) const;

    // phi^i of an i-form section; requires i < p (delta_i needs i!
    // invertible), else Error("DegreeTooHigh").
    Cochain phi(int degree, const FormSum& form) const;

    // phi applied to a Cech cochain with i-form values (the model-level
    // chain map K_Hig -> K_dR).
    Cochain phi_on_cochain(const Cochain& higgs_cochain) const;

    // Ebar_alpha evaluated on a standard basis vector (exposed for the
    // homotopy construction).
    const FormSum& ebar(int chart, int j) const { return ebar_[chart][j]; }

  private:
    Cochain phi_one(const FormSum& one_form) const;

    const Atlas* atlas_;
    std::vector<std::vector<FormSum>> ebar_; // [chart][standard basis j]
};

// ---- psi on hypercohomology -------------------------------------------------

struct PsiMatrix {
    MatF matrix; // square: Higgs basis -> dR basis
    // column labels: (form degree i, weight, index); row labels: (weight,
    // index in H^mdeg of the weight block)
    struct ColLabel {
        int i;
        Weight m;
        int idx;
    };
    struct RowLabel {
        Weight m;
        int idx;
    };
    std::vector<ColLabel> cols;
    std::vector<RowLabel> rows;
};

// The degree-mdeg block of the splitting isomorphism on hypercohomology:
// Higgs classes (+)_i H^{mdeg-i}(Omega^i(log D)) -> H^mdeg(dR). Requires
// dim X < p; certified invertible (Error("NotInvertible")) and
// W-compatible.
PsiMatrix psi_on_cohomology(Session& session, const SplitData& split,
                            int mdeg);

// ---- functoriality ----------------------------------------------------------

struct MorphismData {
    ToricMorphism mor;
    std::vector<int> chi; // source chart -> target chart
    IMat char_map;        // transpose of the lattice map: M_Y -> M_X
};

MorphismData make_morphism_data(const ToricMorphism& mor);

// Pull a target-atlas cochain back along the morphism (alternating in the
// chart tuples, monomial substitution on values).
Cochain pullback_cochain(const MorphismData& md, const Atlas& src_atlas,
                         const Atlas& dst_atlas, const Cochain& c);

// Higgs pullback of a form: f'*(y^m w) = x^{A^T m} Lambda(A^T) w.
FormSum pullback_form(const MorphismData& md, const FormSum& f);

// eta_1 on a one-form of the target, as the (0,0)-cochain
// { (f* Ebar^Y_{chi(alpha)} - Ebar^X_alpha A^T)(w) } after the weight
// shift.
Cochain eta_one(const MorphismData& md, const Atlas& src_atlas,
                const SplitData& split_src, const SplitData& split_dst,
                const FormSum& one_form);

// eta_i delta_i applied to an i-form on the target; total degree i-1.
Cochain eta(const MorphismData& md, const Atlas& src_atlas,
            const SplitData& split_src, const SplitData& split_dst,
            int degree, const FormSum& form);

// The homotopy identity f* phi_Y^i - phi_X^i f'* = D(eta_i delta_i) on one
// basis section; returns both sides for reporting.
struct HomotopyCheck {
    Cochain lhs, rhs;
    bool pass;
};

HomotopyCheck homotopy_check(const MorphismData& md, const Atlas& src_atlas,
                             const Atlas& dst_atlas,
                             const SplitData& split_src,
                             const SplitData& split_dst, int degree,
                             const FormSum& form);

// Identity-morphism data for comparing two lifts of the same model.
MorphismData identity_morphism(const Fan& fan, const DivisorSet& divisor);

} // namespace logfrob

#endif
