// The two-step purification protocol: bit-flip correction by port routing
// plus conditional HWPs, then iterative phase-flip purification of the
// converted pairs, with the closed-form recursions and a discarding baseline
// for efficiency comparison.
#pragma once

#include <vector>

#include "depsim/optics.hpp"
#include "depsim/qstate.hpp"

namespace depsim {

struct Step1Result {
    // Deps sector; supported on span{Phi+, Phi-} for Werner inputs.
    DensityOperator state;
    // Kept pairs per input pair. Exactly 1 for the correcting first step.
    double yield = 0.0;
};

// First step of the modified scheme: port routing, HWPs on ports 3 and 4,
// ideal merge. Corrects every bit-flip class and keeps every pair; a Werner
// input of fidelity F leaves with weights (4F+3)/7 on Phi+ and 4(1-F)/7 on
// Phi-. Deps sector only; trace-preserving for arbitrary inputs.
Step1Result step1_correct(const DensityOperator& rho);

// Baseline first step that discards instead of correcting: keeps only the
// port-(1,2) block, dropping every bit-flip class. For a Werner input the
// yield is F + (1-F)/7 and the kept fidelity 7F/(6F+1).
Step1Result step1_discard_baseline(const DensityOperator& rho);

struct Step2Result {
    DensityOperator state;  // Bell sector, canonical {Phi+, Phi-} form
    double pass_probability = 0.0;
    double output_fidelity = 0.0;  // fidelity of state wrt Phi+
};

// One purification round on two copies of rho: bilateral Hadamards, parity
// check on rho (x) rho, sigma_x readout with conditional phase flip, and
// closing bilateral Hadamards that map the kept ensemble back to the
// {Phi+, Phi-} sector so every round is the same map. For a diagonal input
// p*Phi+ + (1-p)*Phi-: pass probability (p^2+(1-p)^2)/2 and output fidelity
// p^2/(p^2+(1-p)^2). Throws std::invalid_argument if the input has support
// outside span{Phi+, Phi-} beyond 1e-10.
Step2Result step2_purify(const DensityOperator& rho);

// Closed form for one full round on a Werner input of fidelity F:
// F' = (4F+3)^2 / (32F^2 - 8F + 25). Domain error outside [0, 1].
double fidelity_recursion(double f);

// Per-round map on the Phi+ sector weight: p' = p^2 / (p^2 + (1-p)^2).
// Improves p iff p > 1/2, i.e. F > 1/8 for Werner inputs.
// Domain error outside [0, 1].
double sector_recursion(double p);

struct TraceRow {
    int round = 0;
    double fidelity = 0.0;          // wrt Phi+ of the current sector
    double pass_probability = 0.0;  // round 0 reports the conversion success eta^2
    double cumulative_yield = 0.0;  // surviving pairs per initial pair
};

struct PurificationTrace {
    // rounds[0] is the state after bit-flip correction and wavelength
    // conversion; rounds[k] after k purification rounds. A purification
    // round consumes two pairs to produce at most one, so cumulative yield
    // picks up a factor pass_probability/2 per round.
    std::vector<TraceRow> rounds;
};

// Runs the full protocol from a Werner state of fidelity f0 through the
// requested number of purification rounds with conversion efficiency eta.
PurificationTrace iterate(double f0, int rounds, double eta);

struct SchemeComparison {
    double f0 = 0.0;
    double corrected_yield = 0.0;     // correcting first step (always 1)
    double corrected_fidelity = 0.0;  // (4F+3)/7
    double baseline_yield = 0.0;      // F + (1-F)/7
    double baseline_fidelity = 0.0;   // 7F/(6F+1)
};

// Step-1 yield and post-step-1 fidelity of the correcting scheme vs the
// discarding baseline, both computed through the exact circuits.
SchemeComparison compare_schemes(double f0);

}  // namespace depsim
