#pragma once

#include <stdexcept>
#include <string>

namespace loopcx {

// Base class for every failure the library can signal. The CLI maps
// LoopcxError to exit code 1 and ConfigError to exit code 2.
struct LoopcxError : std::runtime_error {
  explicit LoopcxError(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

#define LOOPCX_DEFINE_ERROR(Name)                                          \
  struct Name : LoopcxError {                                              \
    explicit Name(const std::string& msg) : LoopcxError(#Name ": " + msg) {} \
  }

// matrix groups
LOOPCX_DEFINE_ERROR(BranchCutProximity);  // log near the cut: spectrum within delta of -1
LOOPCX_DEFINE_ERROR(TagMismatch);         // operands live over different group specs
LOOPCX_DEFINE_ERROR(NotInGroup);          // sample fails the group membership test
LOOPCX_DEFINE_ERROR(NotInAlgebra);        // tangent datum fails the algebra test

// sampled loops and paths
LOOPCX_DEFINE_ERROR(GridMismatch);        // operands sampled on different grids
LOOPCX_DEFINE_ERROR(EndpointMismatch);    // paths disagree where they must be glued
LOOPCX_DEFINE_ERROR(SupportViolation);    // samples leave the declared support interval
LOOPCX_DEFINE_ERROR(NotFlat);             // no flatness window of the requested order
LOOPCX_DEFINE_ERROR(NotFlatAtPi);         // composite loop not locally constant at the seam
LOOPCX_DEFINE_ERROR(NotBased);            // loop does not sit at the identity at 0

// cocycles and integrals
LOOPCX_DEFINE_ERROR(StepUnderflow);       // finite difference step too small to resolve
LOOPCX_DEFINE_ERROR(NotClosed);           // sheet boundary is not the constant loop
LOOPCX_DEFINE_ERROR(AntipodeDegenerate);  // cone apex hits the log branch cut even after nudging

// DegenerateCell carries the cell location so callers can refine near it.
struct DegenerateCell : LoopcxError {
  std::size_t u_index;
  std::size_t v_index;
  DegenerateCell(std::size_t ui, std::size_t vi, const std::string& msg)
      : LoopcxError("DegenerateCell: cell (" + std::to_string(ui) + ", " +
                    std::to_string(vi) + "): " + msg),
        u_index(ui),
        v_index(vi) {}
};

// central extensions
LOOPCX_DEFINE_ERROR(NotComparable);       // elements project to different base loops
LOOPCX_DEFINE_ERROR(NotNormalized);       // 2-cocycle lacks c(e,.) = c(.,e) = 1
LOOPCX_DEFINE_ERROR(NoLabels);            // extension carries no component-label data
LOOPCX_DEFINE_ERROR(BadInterval);         // restriction interval not inside (0, 2*pi)
LOOPCX_DEFINE_ERROR(ModelMismatch);       // operation needs the other extension model
LOOPCX_DEFINE_ERROR(PeriodMismatch);      // path model holonomy periods off calibration

// finite abelian cohomology
LOOPCX_DEFINE_ERROR(NotACocycle);         // table violates the 2-cocycle identity
LOOPCX_DEFINE_ERROR(NotAlternating);      // bihomomorphism has a nontrivial diagonal
LOOPCX_DEFINE_ERROR(GroupMismatch);       // data attached to different finite groups
LOOPCX_DEFINE_ERROR(OrderTooLarge);       // exhaustive pass refused above the size guard
LOOPCX_DEFINE_ERROR(BadRootOfUnity);      // p/q outside canonical range

// crossed modules and 2-groups
LOOPCX_DEFINE_ERROR(NotDisjointCommutative); // witness pair with nonvanishing pairing
LOOPCX_DEFINE_ERROR(NotComposable);       // target of x differs from source of y
LOOPCX_DEFINE_ERROR(ChecksFailed);        // structure axioms fail on the sample battery
LOOPCX_DEFINE_ERROR(SignBranchAmbiguous); // sign section sits too close to the branch midpoint
LOOPCX_DEFINE_ERROR(NotCentral);          // element expected in the central fibre is not
LOOPCX_DEFINE_ERROR(SupportsOverlap);     // loops required to have disjoint supports overlap

// configuration
struct ConfigError : LoopcxError {
  explicit ConfigError(const std::string& msg) : LoopcxError("ConfigError: " + msg) {}
};

#undef LOOPCX_DEFINE_ERROR

}  // namespace loopcx
