// Optical elements and measurements as explicit maps on states: WDM+PBS port
// routing, conditional half-wave plates, polarization Hadamards, frequency
// up-conversion, two-pair parity-check post-selection and sigma_x readout.
#pragma once

#include <array>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "depsim/qstate.hpp"

namespace depsim {

// Output ports of the routing stage. Photon a exits port 1 or 3, photon b
// exits port 2 or 4; the lower ports (3, 4) flag a bit-flipped photon.
enum class PortId : int { P1 = 1, P2 = 2, P3 = 3, P4 = 4 };

std::string to_string(PortId p);

// Projector onto the two (polarization, frequency) pairs routed to one port:
//   port 1: (H, omega_s),  (V, omega_s')     port 3: (V, omega_s),  (H, omega_s')
//   port 2: (H, omega_i),  (V, omega_i')     port 4: (V, omega_i),  (H, omega_i')
// The two projectors of each photon are orthogonal and sum to identity.
struct PortProjector {
    Photon photon;
    PortId port;

    // Throws std::invalid_argument if the port does not belong to the photon.
    PortProjector(Photon photon, PortId port);

    std::array<std::pair<Polarization, FrequencyLabel>, 2> subspace() const;
    // 4x4 projector on the photon's own (polarization, frequency) space.
    Eigen::Matrix4cd matrix() const;
};

// Deterministic port for a single-photon component. Throws
// std::invalid_argument if freq does not belong to the photon.
PortId port_of(Photon photon, Polarization pol, FrequencyLabel freq);

// Both terms of every class route to one port pair; returns it.
std::pair<PortId, PortId> port_signature(DepsClass c);

// WDM+PBS routing on the pair state: the four port blocks end up in
// distinguishable spatial modes, so coherences between blocks are erased.
// Block-diagonal states (every class mixture) pass through unchanged.
DensityOperator project_onto_port_blocks(const DensityOperator& rho);

// Half-wave plates on ports 3 and 4: flips H <-> V on exactly the amplitude
// components in the lower-port subspaces, leaving frequency labels unchanged,
// then merges the corrected components back into the upper-port modes.
// Deps sector only.
PureState apply_conditional_hwp(const PureState& psi);
DensityOperator apply_conditional_hwp(const DensityOperator& rho);

// Polarization Hadamard on one photon. Bell sector only (the plates act on
// the converted pair).
PureState apply_hadamard(const PureState& psi, Photon photon);
DensityOperator apply_hadamard(const DensityOperator& rho, Photon photon);

// |V> -> -|V> on one photon. Bell sector only.
PureState apply_phase_flip(const PureState& psi, Photon photon);
DensityOperator apply_phase_flip(const DensityOperator& rho, Photon photon);

struct ConversionResult {
    DensityOperator state;      // Bell sector
    double success_probability; // eta^2, one conversion per photon
};

// Up-conversion to a common frequency: the partial isometry
//   |H, omega_s> -> |H>,  |V, omega_s'> -> |V>   (photon a, same for b)
// defined on the correlated subspace left by the first step. Throws
// std::invalid_argument if the state has support outside that subspace
// beyond 1e-10 (a protocol-ordering bug), or std::domain_error unless
// 0 < eta <= 1. Success probability eta^2 affects yield only, never the
// returned state.
ConversionResult wavelength_convert(const DensityOperator& rho, double eta);

struct ParityCheckResult {
    double pass_probability = 0.0;
    // Renormalized four-photon state (a1, b1, a2, b2) restricted to the
    // four-mode coincidence; empty when the pass probability is zero.
    std::optional<DensityOperator> kept_state;
};

// Each party overlaps its two photons on a PBS; the four-mode coincidence
// keeps exactly the components where a1, a2 share a polarization and b1, b2
// share a polarization. Both inputs must be Bell sector.
ParityCheckResult parity_check_postselect(const DensityOperator& pair1,
                                          const DensityOperator& pair2);

enum class SigmaXOutcome { Plus, Minus };

std::string to_string(SigmaXOutcome o);

struct MeasurementOutcome {
    SigmaXOutcome photon_a;  // measured photon a2
    SigmaXOutcome photon_b;  // measured photon b2

    bool parallel() const { return photon_a == photon_b; }
};

struct SigmaXBranch {
    MeasurementOutcome outcome;
    double probability = 0.0;
    // Kept pair (a1, b1) after the conditional phase flip; empty for
    // zero-probability branches.
    std::optional<DensityOperator> kept;
};

// sigma_x readout of the second pair: projects a2 and b2 onto |+x>/|-x| and
// applies a phase flip to the kept pair when the outcomes are antiparallel.
// Enumerates all four branches with exact probabilities (they sum to one).
// BellPair sector only.
std::vector<SigmaXBranch> enumerate_sigma_x_branches(const DensityOperator& four_photon);

// Samples one branch with the caller's random source.
std::pair<MeasurementOutcome, DensityOperator> measure_sigma_x_and_correct(
    const DensityOperator& four_photon, std::mt19937_64& rng);

// Probability-weighted ensemble of the corrected kept pair over all branches.
DensityOperator sigma_x_branch_average(const DensityOperator& four_photon);

}  // namespace depsim
