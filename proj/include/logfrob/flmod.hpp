// Fontaine-Laffaille modules at desk scale: a finite-dimensional space with
// a decreasing filtration and an isomorphism from its graded space, plus
// strict morphisms with kernels and cokernels carrying induced structure.

#ifndef LOGFROB_FLMOD_HPP
#define LOGFROB_FLMOD_HPP

#include <vector>

#include "logfrob/linalg.hpp"

namespace logfrob {

struct FLModule {
    int dim = 0;
    Flag fil;  // decreasing, steps[0] = full, steps.back() = zero
    MatF psi;  // dim x dim, columns indexed by the concatenated canonical
               // Gr^l bases, l ascending
    std::vector<int> gr_dims;

    // canonical quotient per level (derived from fil)
    Quotient gr_level(int l) const;
};

FLModule make_fl_module(Flag fil, MatF psi);

bool fl_validate(const FLModule& m);

struct StrictnessResult {
    bool pass = true;
    int level = -1;  // failing filtration level
    VecF witness;    // element of f(src) cap Fil^level(dst) missed by
                     // f(Fil^level(src))
};

StrictnessResult strictness_check(const MatF& f, const Flag& src,
                                  const Flag& dst);

// (+)_l Gr^l(f) in the canonical graded bases; throws
// Error("NotCompatible") when f is not filtered.
MatF gr_matrix(const MatF& f, const FLModule& src, const FLModule& dst);

// Throws Error("NotAnFLMorphism") when f is not filtered or fails to
// intertwine the psi structures through its graded matrix.
void check_fl_morphism(const MatF& f, const FLModule& src,
                       const FLModule& dst);

// Kernel and cokernel with induced filtration and psi; verifies strictness
// as a byproduct per Faltings' theorem.
std::pair<FLModule, FLModule> kernel_cokernel(const MatF& f,
                                              const FLModule& src,
                                              const FLModule& dst);

} // namespace logfrob

#endif
