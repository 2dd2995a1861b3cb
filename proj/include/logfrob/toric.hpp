// Geometry front-end: smooth complete fans, torus-invariant divisors, ample
// twists, toric morphisms, and the character-graded description of the
// spaces of logarithmic forms on each invariant chart.
//
// A chart context is a (face) cone given by its rays together with divisor
// membership and twist shift per ray. The weight-m slice of
// Omega^i(log D) (x L) on that chart is a subspace of Lambda^i((M/p)^n) in
// the lex wedge basis; the conditions are per ray: with
// a = <m, rho> + shift,
//   a < 0            -> the slice is zero,
//   a = 0, rho not in D -> the slice lies in ker(contraction by rho),
//   otherwise        -> no condition.

#ifndef LOGFROB_TORIC_HPP
#define LOGFROB_TORIC_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "logfrob/exterior.hpp"
#include "logfrob/linalg.hpp"

namespace logfrob {

using IVec = Eigen::VectorXi;
using IMat = Eigen::MatrixXi;

struct Fan {
    int n = 0;                              // lattice rank
    std::vector<IVec> rays;                 // primitive generators
    std::vector<std::vector<int>> max_cones; // ray index sets, each sorted
};

struct DivisorSet {
    std::vector<int> rays_in_divisor; // sorted ray indices

    bool contains(int ray) const;
};

struct Twist {
    std::vector<int> coeffs; // a_rho per ray; L = O(sum a_rho D_rho)
};

struct ValidityReport {
    bool smooth = false;
    bool complete = false;
    int n = 0;
    bool dim_less_p = false;
};

// Throws Error("NotSmooth") / Error("NotComplete") on failure.
ValidityReport validate(const Fan& fan, int p);

// Structural sanity used at parse time (ray primitivity, index ranges);
// throws Error("SpecParseError").
void check_fan_wellformed(const Fan& fan);

bool is_ample(const Fan& fan, const Twist& twist);

struct ChartContext {
    int n = 0;
    std::vector<int> ray_ids;      // sorted global ray indices
    std::vector<IVec> rays;
    std::vector<bool> in_divisor;
    std::vector<int> shift;        // twist contribution per ray

    bool has_ray(int ray_id) const;
};

ChartContext make_context(const Fan& fan, const std::vector<int>& ray_ids,
                          const DivisorSet& D, const Twist* twist);

// For a smooth max cone: rows are the dual basis characters m_t with
// <m_t, rho_u> = delta_{tu}.
IMat adapted_dual_basis(const Fan& fan, const std::vector<int>& cone);

// Weight-m slice of Omega^i(log D) (x L) on the chart.
Subspace form_space(const ChartContext& ctx, const IVec& m, int i);

// Same with D treated as empty: weight-m slice of the no-log sheaf Omega^i.
Subspace form_space_nolog(const ChartContext& ctx, const IVec& m, int i);

// Weight-m slice of W_l Omega^i(log D) (x L): the image of
// Lambda^l(log-admissible) wedge Lambda^(i-l)(no-log-admissible) inside the
// full slice.
Subspace weight_slice(const ChartContext& ctx, const IVec& m, int i, int l);

// Hodge (stupid) filtration slice: full for i >= l, zero otherwise.
Subspace hodge_slice(const ChartContext& ctx, const IVec& m, int i, int l);

// Lex-ordered character search box: the twist polytope's vertex box padded
// by `radius` in every coordinate. The two extra layers used by the shell
// audit are enumerated separately via weight_shell.
std::vector<IVec> weight_support(const Fan& fan, const Twist* twist,
                                 int radius);
// Characters with box-distance in (radius, radius + 2].
std::vector<IVec> weight_shell(const Fan& fan, const Twist* twist,
                               int radius);

int default_weight_radius(const Fan& fan, const Twist* twist);

struct ToricMorphism {
    IMat lattice_map; // N_src -> N_dst, n_dst x n_src
    Fan source, target;
    DivisorSet source_divisor, target_divisor;
};

// Checks cone-to-cone mapping and the divisor preimage condition
// f^{-1}E subset D; returns the chart assignment chi (source max cone ->
// target max cone, first match in input order). Throws
// Error("NoChartAssignment").
std::vector<int> chart_assignment(const ToricMorphism& f);

} // namespace logfrob

#endif
