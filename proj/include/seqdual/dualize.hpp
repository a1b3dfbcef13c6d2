#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "seqdual/seqnorm.hpp"

namespace seqdual {

// Computation path selection, mapped from the CLI's --method flag. Auto
// prefers closed forms and falls back to ascent; ForceExact errors when no
// closed form exists; BruteForce grids the variable (dimension <= 3 only).
enum class MethodChoice { Auto, ForceExact, ForceAscent, BruteForce };
MethodChoice parse_method(const std::string& text);

// The norm of x as an element of the dual class of `inner` over `base`:
// sup of sum_j |<phi_j, x_j>| over functional sequences (phi_j) in the unit
// ball of inner over dual(base). Requires a spherically complete inner class.
struct DualNormProblem {
  ClassId inner;
  Space base;
  VecSeq x;

  DualNormProblem(ClassId inner, Space base, VecSeq x);
};

NormCert dual_norm(const DualNormProblem& problem, const OptConfig& cfg,
                   MethodChoice method = MethodChoice::Auto,
                   const std::vector<Vec>& extra_inits = {});

// max objective over the unit ball of the `cls` norm on `space`-valued
// sequences of the given length. The objective takes the flattened sequence
// (slot j occupies entries [j*dim, (j+1)*dim)). Classes whose ball admits a
// closed-form linear maximization oracle get damped-jump steps; the rest run
// plain normalized subgradient ascent.
NormCert maximize_over_seq_ball(const ConvexObjective& objective,
                                const ClassId& cls, const Space& space,
                                int length, const OptConfig& cfg,
                                const std::vector<Vec>& extra_inits = {});

// Class-norm facade covering Dual classes: dispatches Dual(...) to dual_norm
// and everything else to class_norm. The support sequence of the NormEval
// variant norms x (sum_j <g_j, x_j> = value) and lies in the unit ball of
// the dual class, which makes it the natural warm start when transporting
// witnesses between the two sides of a duality identity.
NormCert norm_of(const ClassId& cls, const VecSeq& x, const OptConfig& cfg,
                 const std::vector<Vec>& extra_inits = {});
NormEval norm_of_with_support(const ClassId& cls, const VecSeq& x,
                              const OptConfig& cfg,
                              const std::vector<Vec>& extra_inits = {});

// Prefix values of any class norm, Dual included; ascent paths are
// warm-started from the previous prefix's witness.
std::vector<double> prefix_norms_of(const ClassId& cls, const VecSeq& x,
                                    const OptConfig& cfg);

// Both suprema over the same ball: |sum_j <phi_j, x_j>| (plain) and
// sum_j |<phi_j, x_j>| (absolute). Sign flips inside the ball make these
// equal for spherically complete classes; the pair exposes the margin.
std::pair<double, double> sup_equality_check(const DualNormProblem& problem,
                                             const OptConfig& cfg);

// sum_j <phi_j, x_j> for equal-length sequences with phis over dual(x.space).
double pairing_apply(const VecSeq& phis, const VecSeq& x);

// The two norms of the functional x -> pairing_apply(phis, x) on length-k
// sequences: its operator norm on the inner-class ball over E, and the dual
// class norm of phis itself. Equal when the inner class is dual-representable
// (linearly stable + finitely dominated + finitely injective + spherically
// complete + c00-dense); rejected otherwise, naming the missing flag.
std::pair<double, double> functional_norm_as_dual_element(
    const ClassId& inner, const Space& E, int k, const VecSeq& phis,
    const OptConfig& cfg);

// Extract the representing functional sequence (phi_j) of a black-box linear
// functional on length-k sequences over E, by evaluating it on the basis
// sequences e_i . e_j. Linearity is spot-checked on seeded random pairs.
VecSeq coordinate_functionals(
    const std::function<double(const VecSeq&)>& functional, const Space& E,
    int k);

// (class norm of x, norm of x in the double-dual class). The second never
// exceeds the first beyond optimizer slop; equality for reflexive classes.
std::pair<double, double> bidual_gap(const ClassId& inner, const VecSeq& x,
                                     const OptConfig& cfg);

}  // namespace seqdual
