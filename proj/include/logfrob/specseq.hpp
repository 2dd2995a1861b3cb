// Filtered complexes over F_p and their spectral sequences, computed
// literally from the Z_r/B_r subspace formulas. Increasing filtrations are
// run through the reindexing Wtilde^i = W_{-i}. When both filtrations are
// present the engine also computes the three induced filtrations F_d,
// F_{d*} and the recurrent one on every page spot, the latter by its
// inductive subquotient definition.

#ifndef LOGFROB_SPECSEQ_HPP
#define LOGFROB_SPECSEQ_HPP

#include <map>
#include <vector>

#include "logfrob/flmod.hpp"
#include "logfrob/linalg.hpp"

namespace logfrob {

struct FilteredComplexFp {
    int deg_lo = 0;
    std::vector<int> dims;  // per degree deg_lo .. deg_lo + dims.size() - 1
    std::vector<MatF> d;    // d[k] : K^{deg_lo+k} -> K^{deg_lo+k+1}

    int w_lo = 0, w_hi = -1;
    std::vector<std::vector<Subspace>> W; // [k][l - w_lo], increasing

    int f_lo = 0, f_hi = -1;
    std::vector<std::vector<Subspace>> Fil; // [k][l - f_lo], decreasing

    int deg_hi() const { return deg_lo + static_cast<int>(dims.size()) - 1; }
    int dim_at(int deg) const;
    MatF d_from(int deg) const; // zero map outside range
    Subspace w_step(int deg, int l) const;   // clamped
    Subspace fil_step(int deg, int l) const; // clamped

    void validate() const; // d^2 = 0, flags respected and chained

    std::vector<int> h_dims() const; // dim H^deg for deg_lo..deg_hi
};

struct PageSpot {
    int i = 0, j = 0;
    Subspace Z, B;
    Quotient E;
    MatF d; // to the (i+r, j-r+1) spot

    // three filtrations (per Fil level, f_lo..f_hi+1), when computed
    std::vector<Subspace> Fd, Fdstar, Frec;
    std::vector<Subspace> frec_pullback; // subspaces of K^{i+j}
};

struct Page {
    int r = 0;
    std::map<std::pair<int, int>, PageSpot> spots;
    bool zero_differentials = true;

    const PageSpot* spot(int i, int j) const;
};

class SpectralSequence {
  public:
    enum class Along { W, Fil };

    SpectralSequence(const FilteredComplexFp& k, Along along,
                     bool three_filtrations);

    // Runs pages 0..r_stop (auto-stabilization when r_stop < 0), then the
    // infinity page. Audits the Z/B recursion and convergence.
    void run(int r_stop = -1);

    const std::vector<Page>& pages() const { return pages_; }
    const Page& infinity() const { return infinity_; }
    int degeneration_radius() const { return degeneration_radius_; }
    int i_lo() const { return i_lo_; }
    int i_hi() const { return i_hi_; }
    const FilteredComplexFp& complex() const { return *k_; }

  private:
    Subspace filt(int deg, int i) const; // the decreasing reinterpretation
    PageSpot make_spot(int r, int i, int j) const;
    PageSpot make_infinity_spot(int i, int j) const;
    void attach_three_filtrations(Page& page, const Page* prev);

    const FilteredComplexFp* k_;
    Along along_;
    bool three_;
    int i_lo_ = 0, i_hi_ = 0;
    std::vector<Page> pages_;
    Page infinity_;
    int degeneration_radius_ = 1;
};

// ---- mixed Fontaine-Laffaille complexes -------------------------------------

struct MFLComplex {
    FilteredComplexFp dR;
    FilteredComplexFp hig;  // same spaces and flags, the Fil-graded
                            // differential
    std::vector<MatF> psi;  // per degree, hig -> dR
};

// Axioms: psi is a (W, Fil)-filtered chain map and a W-filtered
// quasi-isomorphism (per-level cohomology isomorphism); Fil steps are
// coordinate-aligned so that the graded projections are defined. Throws
// Error("AxiomViolation").
void validate_mflc(const MFLComplex& m);

struct MFLSpot {
    int r, i, j;
    MatF psi_r;                 // E_r,hig -> E_r,dR
    MatF mu;                    // Gr_{Fil_rec} E_r,dR -> E_r,hig
    FLModule module;            // (E_r,dR, Fil_rec, psi_r o mu)
    bool filtrations_coincide;  // F_d = F_rec = F_{d*}
    bool d_strict;
    bool intertwines;           // psi_r d_{r,hig} = d_{r,dR} psi_r
    bool mu_commutes;           // mu Gr(d_r,dR) = d_{r,hig} mu
};

struct MFLPages {
    SpectralSequence dr;
    SpectralSequence hig;
    std::vector<std::vector<MFLSpot>> spots; // per page r >= 1
    int degeneration_radius;
    bool all_pass;

    MFLPages(const FilteredComplexFp& a, const FilteredComplexFp& b)
        : dr(a, SpectralSequence::Along::W, true),
          hig(b, SpectralSequence::Along::W, false), degeneration_radius(1),
          all_pass(false)
    {
    }
};

MFLPages mfl_pages(const MFLComplex& m, int r_stop = -1);

// H^mdeg with the induced Hodge filtration and the psi-induced
// isomorphism from its Fil-graded space; requires E_1-degeneration of the
// Fil spectral sequence (Error("NoDegeneration")).
FLModule fl_structure_on_h(const MFLComplex& m, int mdeg);

} // namespace logfrob

#endif
