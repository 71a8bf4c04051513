#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "loopcx/config.hpp"
#include "loopcx/report.hpp"
#include "loopcx/twogroup.hpp"

namespace loopcx {

// Deterministic fixtures shared by the verify suites, the CLI and the
// acceptance gate. Every randomized battery draws from counter-based
// (seed, index) streams, so reruns are bit-identical.

// (-i/2) n.sigma / |n|
Mat su2_direction(double nx, double ny, double nz);

// based loop exp(amp * profile * dir) supported in (a, b); the sitting
// window is fitted to the support so construction never trips the
// flatness checks
SampledLoop bump_loop(const SpecPtr& spec, int N, std::pair<double, double> support,
                      double amp, const Mat& dir);

// loop winding k times through the given U(1) factor across (a, b),
// identity outside
SampledLoop winding_loop(const SpecPtr& spec, int N, std::pair<double, double> support,
                         std::int64_t k, int factor);

// path rising smoothly from e to exp(amp * dir), flat at both ends
SampledPath ramp_path(const SpecPtr& spec, int M, double amp, const Mat& dir);

// sum_j ||log g(t_j)||_F, the functional behind the perturbed-section probe
double path_log_mass(const SampledPath& g);

// disjoint-support pairs: first factor in (0.5, pi - 0.3), second in
// (pi + 0.3, 2 pi - 0.5), supports and amplitudes jittered per index
std::vector<std::pair<SampledLoop, SampledLoop>> commutator_battery(
    const SpecPtr& spec, int N, std::size_t pairs, std::uint64_t seed);

// scalar-model closed forms
double rplus_pairing_closed_form(double s, double t, const SampledLoop& g,
                                 const SampledLoop& h);
// signed Peiffer gap for lifts over mu and delta, paired with the predicted
// skew log mu(s) log delta(2 pi - t); evaluation points snap to the grid
std::pair<double, double> rplus_peiffer_gap(const CocycleModelExt& ext, double s, double t,
                                            const SampledLoop& mu, const SampledLoop& del);

// |equivalence angle between i(g1 g2) and i(g1) i(g2)|
double fusion_hom_gap(const FusionFactorization& ff, const SampledPath& g1,
                      const SampledPath& g2);
// the same gap after twisting the section by the step character
// chi(g) = pi [log mass >= theta]; the jump must show up here
double fusion_perturbed_hom_gap(const FusionFactorization& ff, const SampledPath& g,
                                double theta);

// config plumbing
SpecPtr spec_from_config(const RunConfig& cfg);
bool path_model_group(const RunConfig& cfg);
LiftStyle lift_from_config(const RunConfig& cfg);
CocycleModelExt cocycle_model_from_config(const RunConfig& cfg);
PathModelExt path_model_from_config(const RunConfig& cfg);

// law batteries shared by the twogroup suite and the acceptance gate; one
// row per law, measured = worst gap over the sample battery
Report two_group_law_report(const TwoGroup& tg, int samples, std::uint64_t seed, double tol);
Report fibre_product_report(const TwoGroup& tg, int triples, std::uint64_t seed, double tol);

// verify suites
Report run_loopspace_suite(const RunConfig& cfg);
Report run_cocycles_suite(const RunConfig& cfg);
Report run_centralext_suite(const RunConfig& cfg);
Report run_abelcoh_suite(const RunConfig& cfg);
Report run_xmod_suite(const RunConfig& cfg);
Report run_twogroup_suite(const RunConfig& cfg);
Report run_fusion_suite(const RunConfig& cfg);
Report run_comparison_suite(const RunConfig& cfg);
// dispatch by cfg.suite; "all" chains every suite defined for the group
Report run_suite(const RunConfig& cfg);

// subcommand backends
Report run_periods(const RunConfig& cfg);
Report run_torsion(const RunConfig& cfg);

}  // namespace loopcx
