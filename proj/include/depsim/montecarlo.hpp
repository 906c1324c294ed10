// Trajectory-sampling cross-check of the exact engine. Every ensemble the
// protocol touches is diagonal in a known class basis, so trajectories track
// class labels exactly; the per-class branch probabilities come from the
// optics enumeration.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "depsim/optics.hpp"
#include "depsim/qstate.hpp"

namespace depsim::mc {

// Master seed plus the stream derivation rule: the stream for (domain,
// index) is a pure function of (master, domain, index), so trials and
// purification pairs can run in any order or thread count without changing
// results. Step-1 trials use (kDomainStep1, trial index); round r pairings
// use (kDomainRound + r, pair index).
struct SeedSpec {
    std::uint64_t master = 1;

    std::mt19937_64 stream(std::uint64_t domain, std::uint64_t index) const;
};

inline constexpr std::uint64_t kDomainStep1 = 0x5331;
inline constexpr std::uint64_t kDomainRound = 0x5332;

// Draws a class from the Werner distribution: Phi+ with probability f,
// each of the seven error classes with probability (1-f)/7.
// Domain error outside [0, 1].
DepsClass sample_class(double f, std::mt19937_64& rng);

struct Step1Trajectory {
    std::pair<PortId, PortId> ports;
    DepsClass corrected;  // PhiPlus or PhiMinus; the class sign survives
};

// Routes one sampled class through the correcting first step: ports per the
// class signature, bit-flip undone by the HWPs. Deterministic.
Step1Trajectory run_step1_trajectory(DepsClass c);

struct BaselineTrajectory {
    std::pair<PortId, PortId> ports;
    bool kept = false;  // true iff the pair exits ports (1, 2)
};

// The discarding baseline keeps only port-(1,2) events.
BaselineTrajectory run_baseline_step1_trajectory(DepsClass c);

struct Step2Trajectory {
    bool pass = false;
    std::optional<DepsClass> kept;  // canonicalized class of the kept pair
    std::optional<MeasurementOutcome> outcome;
};

// One purification attempt on a pair of step-1 survivors. Equal classes pass
// the parity check with probability 1/2 and keep their class; crossed
// classes never pass. The sigma_x outcomes are uniform over the four
// branches and never change the kept class after correction (both facts
// from the exact enumeration). Classes must be PhiPlus or PhiMinus.
Step2Trajectory run_step2_trajectory(DepsClass c1, DepsClass c2, std::mt19937_64& rng);

struct McStatistics {
    std::uint64_t trials = 0;  // attempts entering this round
    std::uint64_t kept = 0;
    // Phi+ fraction among kept pairs and its binomial standard error
    // sqrt(f(1-f)/kept); NaN when nothing was kept.
    double fidelity_estimate = 0.0;
    double standard_error = 0.0;
};

// Full sampled experiment: Werner sampling + step 1 + conversion (round 0),
// then `rounds` purification rounds pairing survivors (2i, 2i+1). Returns
// one statistics row per round, index 0 first. Results are a pure function
// of the arguments; `threads` only changes the execution schedule.
// Throws std::invalid_argument if trials is 0.
std::vector<McStatistics> run_experiment(double f0, int rounds, std::uint64_t trials,
                                         const SeedSpec& seed, double eta = 1.0,
                                         unsigned threads = 1);

// Step-1 sampling for the discarding baseline; `kept` counts port-(1,2)
// events, so kept/trials estimates the baseline yield.
McStatistics run_baseline_experiment(double f0, std::uint64_t trials, const SeedSpec& seed,
                                     unsigned threads = 1);

}  // namespace depsim::mc
