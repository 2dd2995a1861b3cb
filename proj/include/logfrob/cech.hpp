// Cech hypercohomology of the logarithmic de Rham complex over the cover by
// maximal cones. Everything is computed weight by weight: a WeightComplex
// is the total complex of the per-character Cech-de Rham double complex,
// with total differential D = delta + (-1)^r d and the induced W and Fil
// flags. Variant builders produce the tau-truncated and W-graded
// subquotient complexes needed by the truncation comparison.

#ifndef LOGFROB_CECH_HPP
#define LOGFROB_CECH_HPP

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "logfrob/forms.hpp"
#include "logfrob/toric.hpp"

namespace logfrob {

struct Atlas {
    Fan fan;
    DivisorSet divisor;
    std::optional<Twist> twist;
    int p = 0;
    ValidityReport validity;

    std::vector<ChartContext> charts; // per max cone
    struct Tuple {
        std::vector<int> charts; // strictly increasing chart indices
        ChartContext ctx;        // context of the common face
    };
    std::vector<Tuple> tuples; // ordered by (length, lex)
    std::map<std::vector<int>, int> tuple_ids;

    int num_charts() const { return static_cast<int>(charts.size()); }
    int tuple_id(const std::vector<int>& t) const;
};

Atlas make_atlas(const Fan& fan, const DivisorSet& divisor,
                 const std::optional<Twist>& twist, int p);

// Alternating-extension lookup: charts may repeat or be unsorted; returns
// (sign, tuple id) with sign 0 for degenerate tuples.
std::pair<int, int> alternating_tuple(const Atlas& atlas,
                                      std::vector<int> charts);

// A cochain with FormSum values per (tuple, form degree). Weights are free:
// a cochain may mix characters; per-weight slices are extracted when
// solving.
class Cochain {
  public:
    Cochain() : atlas_(nullptr) {}
    explicit Cochain(const Atlas& atlas) : atlas_(&atlas) {}

    const Atlas& atlas() const { return *atlas_; }
    bool is_zero() const;
    const std::map<std::pair<int, int>, FormSum>& entries() const
    {
        return entries_;
    }

    FormSum get(int tuple, int s) const;
    void add(int tuple, int s, const FormSum& f);

    Cochain operator+(const Cochain& o) const;
    Cochain operator-(const Cochain& o) const;
    Cochain operator*(Fp c) const;
    bool operator==(const Cochain& o) const;

    // D = delta + (-1)^r d on an (r, s) component.
    Cochain total_differential() const;

    // cup product with the (-1)^(r1 s2) sign convention
    Cochain cup(const Cochain& o) const;

    std::vector<Weight> weights() const;

  private:
    const Atlas* atlas_;
    std::map<std::pair<int, int>, FormSum> entries_;
};

// ---- complexes ------------------------------------------------------------

struct ComplexOptions {
    bool tau = false;                // canonical truncation in the s grading
    std::optional<int> gr_level;     // Gr^W_l
    bool gr_before_tau = false;      // order when both tau and gr are set
    std::optional<int> w_sub;        // W_l subcomplex
    std::optional<int> fil_sub;      // Fil^l subcomplex (s >= l)
};

struct Summand {
    int tuple;
    int s;
    Quotient coords; // big/small pair for this slot
};

struct BuiltComplex {
    IVec m;
    int kmax = 0;
    std::vector<std::vector<Summand>> summands; // per total degree
    std::vector<int> dims;
    std::vector<MatF> d_total; // k -> k+1
    std::vector<MatF> d_cech;  // Cech part only (Higgs differential)

    int summand_offset(int k, int idx) const;
    int find_summand(int k, int tuple, int s) const; // -1 if absent
};

BuiltComplex build_weight_complex(const Atlas& atlas, const IVec& m,
                                  const ComplexOptions& opts = {});

// Single-sheaf Cech complex of (W_l) Omega^i(log D) (x L) in weight m;
// degree = Cech degree r. The twist applies only when use_twist is set:
// the Higgs columns of the decomposition live in the untwisted sheaves,
// the vanishing tables in the twisted ones.
BuiltComplex build_sheaf_complex(const Atlas& atlas, const IVec& m, int i,
                                 std::optional<int> w_level,
                                 bool use_twist = false);

struct SolvedComplex {
    BuiltComplex C;
    std::vector<Subspace> cocycles;   // per degree
    std::vector<Subspace> boundaries; // per degree
    std::vector<Quotient> H;          // per degree

    int h_dim(int k) const;
};

SolvedComplex solve_complex(BuiltComplex c);

// W/Fil flags on the coordinates of a plain weight complex.
std::vector<Subspace> w_flag_steps(const Atlas& atlas, const BuiltComplex& c,
                                   int k); // l = -1..n, increasing
std::vector<Subspace> fil_flag_steps(const Atlas& atlas,
                                     const BuiltComplex& c, int k);

// Coordinates of the weight-m slice of a cochain in a plain complex.
VecF embed_cochain(const BuiltComplex& c, const Atlas& atlas,
                   const Cochain& cochain, const IVec& m, int k);
Cochain extract_cochain(const BuiltComplex& c, const Atlas& atlas,
                        const VecF& coords, int k);

// ---- per-weight session ---------------------------------------------------

class Session {
  public:
    Session(Atlas atlas, int weight_radius, int threads = 1);

    const Atlas& atlas() const { return atlas_; }
    const std::vector<IVec>& support() const { return support_; }
    int threads() const { return threads_; }

    const SolvedComplex& weight(const IVec& m);
    // dR hypercohomology dims summed over the support
    std::vector<int> total_h_dims();
    // sheaf cohomology dims H^r(X, W_l Omega^i (x L)) summed over support
    std::vector<int> sheaf_h_dims(int i, std::optional<int> w_level,
                                  bool use_twist = false);

    // induced W_l / Fil^l subspace of H^k for one weight
    Subspace h_w_filtered(const IVec& m, int k, int l);
    Subspace h_fil_filtered(const IVec& m, int k, int l);

    // dims of H^k(W_l K) (cohomology of the subcomplex) per weight, summed
    std::vector<int> subcomplex_h_dims(int l);

    // class solving: per-weight class coordinates of a total-degree-k
    // cocycle; throws Error("NotACocycle"). If the class vanishes at every
    // weight, primitive receives a certificate with D(primitive) = c.
    std::map<Weight, VecF> class_of(const Cochain& c, int k,
                                    Cochain* primitive = nullptr);

    // Exactness audit of the two shell layers beyond the support box;
    // throws Error("RadiusTooSmall") when a shell weight carries
    // cohomology.
    void shell_audit();

    // Precompute and solve all support weights (deterministic result,
    // parallel across weights).
    void warm_up();

  private:
    Atlas atlas_;
    int radius_;
    int threads_;
    std::vector<IVec> support_;
    std::map<Weight, std::shared_ptr<SolvedComplex>> cache_;
    std::map<std::tuple<Weight, int, int, bool>,
             std::shared_ptr<SolvedComplex>>
        sheaf_cache_;

    const SolvedComplex& sheaf_weight(const IVec& m, int i,
                                      std::optional<int> w_level,
                                      bool use_twist);
};

// Truncation comparison: H-dims of Gr^W_l tau_{<p} K versus
// tau_{<p} Gr^W_l K in one weight.
struct MuCheckResult {
    std::vector<int> lhs_dims, rhs_dims;
    bool pass = false;
};

MuCheckResult truncation_mu_check(const Atlas& atlas, const IVec& m, int l);

} // namespace logfrob

#endif
