#include "depsim/protocol.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace depsim {

namespace {

void check_unit_interval(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error(std::string(what) + " must lie in [0, 1]");
    }
}

DensityOperator apply_bilateral_hadamard(const DensityOperator& rho) {
    return apply_hadamard(apply_hadamard(rho, Photon::A), Photon::B);
}

}  // namespace

Step1Result step1_correct(const DensityOperator& rho) {
    const DensityOperator routed = project_onto_port_blocks(rho);
    DensityOperator corrected = apply_conditional_hwp(routed);
    return {std::move(corrected), 1.0};
}

Step1Result step1_discard_baseline(const DensityOperator& rho) {
    if (rho.sector != Sector::Deps) {
        throw std::invalid_argument("step1_discard_baseline: expected deps sector");
    }
    const Eigen::Matrix4cd pa = PortProjector(Photon::A, PortId::P1).matrix();
    const Eigen::Matrix4cd pb = PortProjector(Photon::B, PortId::P2).matrix();
    const Eigen::MatrixXcd block = Eigen::kroneckerProduct(pa, pb);
    Matrix kept = block * rho.mat * block.adjoint();
    const double yield = kept.trace().real();
    if (yield < kAlgebraTol) {
        throw std::domain_error("step1_discard_baseline: no support in the error-free port block");
    }
    return {DensityOperator(Sector::Deps, kept / yield), yield};
}

Step2Result step2_purify(const DensityOperator& rho) {
    if (rho.sector != Sector::Bell) {
        throw std::invalid_argument("step2_purify: expected bell sector");
    }
    const PureState phi_plus = make_bell_state(BellClass::PhiPlus);
    const PureState phi_minus = make_bell_state(BellClass::PhiMinus);
    const double support = fidelity(rho, phi_plus) + fidelity(rho, phi_minus);
    if (1.0 - support > kSupportTol) {
        throw std::invalid_argument(
            "step2_purify: input has support outside span{Phi+, Phi-}");
    }

    // Hadamards turn the phase-flip component Phi- into the bit-flip
    // component Psi+ that the parity check can reject.
    const DensityOperator rotated = apply_bilateral_hadamard(rho);
    const ParityCheckResult parity = parity_check_postselect(rotated, rotated);
    if (!parity.kept_state) {
        throw std::logic_error("step2_purify: parity check kept nothing");
    }
    const DensityOperator kept_pair = sigma_x_branch_average(*parity.kept_state);
    // Closing Hadamards map {Phi+, Psi+} back to {Phi+, Phi-} so the next
    // round sees the same sector.
    DensityOperator out = apply_bilateral_hadamard(kept_pair);
    const double out_fidelity = fidelity(out, phi_plus);
    return {std::move(out), parity.pass_probability, out_fidelity};
}

double fidelity_recursion(double f) {
    check_unit_interval(f, "fidelity");
    const double num = (4.0 * f + 3.0) * (4.0 * f + 3.0);
    const double den = 32.0 * f * f - 8.0 * f + 25.0;
    return num / den;
}

double sector_recursion(double p) {
    check_unit_interval(p, "sector weight");
    const double q = 1.0 - p;
    return p * p / (p * p + q * q);
}

PurificationTrace iterate(double f0, int rounds, double eta) {
    check_unit_interval(f0, "initial fidelity");
    if (rounds < 0) {
        throw std::domain_error("round count must be nonnegative");
    }

    const Step1Result step1 = step1_correct(werner_state(f0));
    const ConversionResult converted = wavelength_convert(step1.state, eta);
    const PureState phi_plus = make_bell_state(BellClass::PhiPlus);

    PurificationTrace trace;
    trace.rounds.reserve(static_cast<std::size_t>(rounds) + 1);
    double cumulative_yield = step1.yield * converted.success_probability;
    trace.rounds.push_back({0, fidelity(converted.state, phi_plus),
                            converted.success_probability, cumulative_yield});

    DensityOperator current = converted.state;
    for (int k = 1; k <= rounds; ++k) {
        Step2Result round = step2_purify(current);
        cumulative_yield *= round.pass_probability / 2.0;
        trace.rounds.push_back({k, round.output_fidelity, round.pass_probability,
                                cumulative_yield});
        current = std::move(round.state);
    }
    return trace;
}

SchemeComparison compare_schemes(double f0) {
    check_unit_interval(f0, "initial fidelity");
    const DensityOperator rho = werner_state(f0);
    const PureState phi_plus = make_basis_state(DepsClass::PhiPlus);

    const Step1Result corrected = step1_correct(rho);
    const Step1Result baseline = step1_discard_baseline(rho);

    SchemeComparison cmp;
    cmp.f0 = f0;
    cmp.corrected_yield = corrected.yield;
    cmp.corrected_fidelity = fidelity(corrected.state, phi_plus);
    cmp.baseline_yield = baseline.yield;
    cmp.baseline_fidelity = fidelity(baseline.state, phi_plus);
    return cmp;
}

}  // namespace depsim
