#include "depsim/optics.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

#include "depsim/random.hpp"

namespace depsim {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) {
        throw std::invalid_argument(msg);
    }
}

void require_sector(const PureState& s, Sector expected, const char* op) {
    require(s.sector == expected,
            std::string(op) + ": expected " + to_string(expected) + " sector, got " + to_string(s.sector));
}

void require_sector(const DensityOperator& s, Sector expected, const char* op) {
    require(s.sector == expected,
            std::string(op) + ": expected " + to_string(expected) + " sector, got " + to_string(s.sector));
}

// Local single-photon index in the (polarization, frequency) space.
int local_index(Polarization pol, int freq_bit) {
    return 2 * static_cast<int>(pol) + freq_bit;
}

// Port block of a 16-dim basis index: bit 1 flags photon a in port 3,
// bit 0 flags photon b in port 4.
int port_block_of(int deps_idx) {
    const int pa = (deps_idx >> 3) & 1;
    const int fa = (deps_idx >> 2) & 1;
    const int pb = (deps_idx >> 1) & 1;
    const int fb = deps_idx & 1;
    return 2 * (pa ^ fa) + (pb ^ fb);
}

// Conditional HWP of one photon: identity on the upper-port subspace,
// H <-> V on the lower-port subspace, lower-port output merged into the
// upper-port mode. Columns (V, omega) and (H, omega') are the flipped ones.
Eigen::Matrix4cd conditional_hwp_matrix() {
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
    u(local_index(Polarization::H, 0), local_index(Polarization::H, 0)) = 1.0;  // (H,w)  kept
    u(local_index(Polarization::V, 1), local_index(Polarization::V, 1)) = 1.0;  // (V,w') kept
    u(local_index(Polarization::H, 0), local_index(Polarization::V, 0)) = 1.0;  // (V,w)  -> (H,w)
    u(local_index(Polarization::V, 1), local_index(Polarization::H, 1)) = 1.0;  // (H,w') -> (V,w')
    return u;
}

Eigen::Matrix2cd hadamard2() {
    Eigen::Matrix2cd h;
    const double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    return h;
}

Eigen::Matrix2cd phase_flip2() {
    Eigen::Matrix2cd z;
    z << 1.0, 0.0, 0.0, -1.0;
    return z;
}

Eigen::Matrix4cd bell_single_photon_op(const Eigen::Matrix2cd& op, Photon photon) {
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    return photon == Photon::A ? Eigen::kroneckerProduct(op, id).eval()
                               : Eigen::kroneckerProduct(id, op).eval();
}

// 4x16 partial isometry of the up-conversion, mapping the correlated
// subspace {|H,w>, |V,w'>} per photon onto the polarization qubit.
Eigen::MatrixXcd conversion_isometry() {
    Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(4, 16);
    for (int pa = 0; pa < 2; ++pa) {
        for (int pb = 0; pb < 2; ++pb) {
            const auto pol_a = static_cast<Polarization>(pa);
            const auto pol_b = static_cast<Polarization>(pb);
            // correlated components carry freq bit == pol bit
            k(bell_index(pol_a, pol_b), deps_index(pol_a, pa, pol_b, pb)) = 1.0;
        }
    }
    return k;
}

// Basis indices of the four-photon space (a1, b1, a2, b2) surviving the
// four-mode coincidence: pol(a1) == pol(a2) and pol(b1) == pol(b2).
bool survives_parity_check(int idx) {
    const int pa1 = (idx >> 3) & 1;
    const int pb1 = (idx >> 2) & 1;
    const int pa2 = (idx >> 1) & 1;
    const int pb2 = idx & 1;
    return pa1 == pa2 && pb1 == pb2;
}

// 4x16 projection of the four-photon state onto a sigma_x outcome of the
// measured pair (a2, b2), keeping pair (a1, b1).
Eigen::MatrixXcd sigma_x_projection(SigmaXOutcome a, SigmaXOutcome b) {
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::RowVector2cd bra_a, bra_b;
    bra_a << s, (a == SigmaXOutcome::Plus ? s : -s);
    bra_b << s, (b == SigmaXOutcome::Plus ? s : -s);
    const Eigen::MatrixXcd meas = Eigen::kroneckerProduct(bra_a, bra_b);
    return Eigen::kroneckerProduct(Eigen::Matrix4cd::Identity(), meas);
}

}  // namespace

std::string to_string(PortId p) { return std::to_string(static_cast<int>(p)); }

PortProjector::PortProjector(Photon ph, PortId pt) : photon(ph), port(pt) {
    const bool valid_a = photon == Photon::A && (port == PortId::P1 || port == PortId::P3);
    const bool valid_b = photon == Photon::B && (port == PortId::P2 || port == PortId::P4);
    require(valid_a || valid_b,
            "port " + to_string(port) + " does not belong to photon " + to_string(photon));
}

std::array<std::pair<Polarization, FrequencyLabel>, 2> PortProjector::subspace() const {
    const bool lower = port == PortId::P3 || port == PortId::P4;
    // upper port: (H, w), (V, w'); lower port: (V, w), (H, w')
    const Polarization pol0 = lower ? Polarization::V : Polarization::H;
    const Polarization pol1 = lower ? Polarization::H : Polarization::V;
    return {{{pol0, frequency_label(photon, 0)}, {pol1, frequency_label(photon, 1)}}};
}

Eigen::Matrix4cd PortProjector::matrix() const {
    Eigen::Matrix4cd p = Eigen::Matrix4cd::Zero();
    for (const auto& [pol, freq] : subspace()) {
        const int i = local_index(pol, frequency_bit(freq));
        p(i, i) = 1.0;
    }
    return p;
}

PortId port_of(Photon photon, Polarization pol, FrequencyLabel freq) {
    require(photon_of(freq) == photon,
            "frequency " + to_string(freq) + " does not belong to photon " + to_string(photon));
    const bool lower = (static_cast<int>(pol) ^ frequency_bit(freq)) != 0;
    if (photon == Photon::A) {
        return lower ? PortId::P3 : PortId::P1;
    }
    return lower ? PortId::P4 : PortId::P2;
}

std::pair<PortId, PortId> port_signature(DepsClass c) {
    const auto [t1, t2] = class_terms(c);
    const std::pair<PortId, PortId> sig1{port_of(Photon::A, t1.pol_a, t1.freq_a),
                                         port_of(Photon::B, t1.pol_b, t1.freq_b)};
    const std::pair<PortId, PortId> sig2{port_of(Photon::A, t2.pol_a, t2.freq_a),
                                         port_of(Photon::B, t2.pol_b, t2.freq_b)};
    if (sig1 != sig2) {
        throw std::logic_error("class " + to_string(c) + " routes its terms to different ports");
    }
    return sig1;
}

DensityOperator project_onto_port_blocks(const DensityOperator& rho) {
    require_sector(rho, Sector::Deps, "project_onto_port_blocks");
    Matrix out = rho.mat;
    for (int r = 0; r < 16; ++r) {
        for (int c = 0; c < 16; ++c) {
            if (port_block_of(r) != port_block_of(c)) {
                out(r, c) = 0.0;
            }
        }
    }
    return DensityOperator(Sector::Deps, std::move(out));
}

PureState apply_conditional_hwp(const PureState& psi) {
    require_sector(psi, Sector::Deps, "apply_conditional_hwp");
    const Eigen::Matrix4cd u = conditional_hwp_matrix();
    const Eigen::MatrixXcd u16 = Eigen::kroneckerProduct(u, u);
    return PureState(Sector::Deps, u16 * psi.amp);
}

DensityOperator apply_conditional_hwp(const DensityOperator& rho) {
    require_sector(rho, Sector::Deps, "apply_conditional_hwp");
    const Eigen::Matrix4cd u = conditional_hwp_matrix();
    const Eigen::MatrixXcd u16 = Eigen::kroneckerProduct(u, u);
    return DensityOperator(Sector::Deps, u16 * rho.mat * u16.adjoint());
}

PureState apply_hadamard(const PureState& psi, Photon photon) {
    require_sector(psi, Sector::Bell, "apply_hadamard");
    return PureState(Sector::Bell, bell_single_photon_op(hadamard2(), photon) * psi.amp);
}

DensityOperator apply_hadamard(const DensityOperator& rho, Photon photon) {
    require_sector(rho, Sector::Bell, "apply_hadamard");
    const Eigen::Matrix4cd u = bell_single_photon_op(hadamard2(), photon);
    return DensityOperator(Sector::Bell, u * rho.mat * u.adjoint());
}

PureState apply_phase_flip(const PureState& psi, Photon photon) {
    require_sector(psi, Sector::Bell, "apply_phase_flip");
    return PureState(Sector::Bell, bell_single_photon_op(phase_flip2(), photon) * psi.amp);
}

DensityOperator apply_phase_flip(const DensityOperator& rho, Photon photon) {
    require_sector(rho, Sector::Bell, "apply_phase_flip");
    const Eigen::Matrix4cd u = bell_single_photon_op(phase_flip2(), photon);
    return DensityOperator(Sector::Bell, u * rho.mat * u.adjoint());
}

ConversionResult wavelength_convert(const DensityOperator& rho, double eta) {
    require_sector(rho, Sector::Deps, "wavelength_convert");
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::domain_error("wavelength_convert: efficiency must lie in (0, 1]");
    }
    const Eigen::MatrixXcd k = conversion_isometry();
    Matrix converted = k * rho.mat * k.adjoint();
    const double kept_weight = converted.trace().real();
    require(1.0 - kept_weight <= kSupportTol,
            "wavelength_convert: state has support outside the correlated subspace "
            "(run the bit-flip correction step first)");
    converted /= kept_weight;
    return {DensityOperator(Sector::Bell, std::move(converted)), eta * eta};
}

ParityCheckResult parity_check_postselect(const DensityOperator& pair1,
                                          const DensityOperator& pair2) {
    require_sector(pair1, Sector::Bell, "parity_check_postselect");
    require_sector(pair2, Sector::Bell, "parity_check_postselect");
    Matrix joint = Eigen::kroneckerProduct(pair1.mat, pair2.mat);
    // Zero every row/column outside the four-mode coincidence subspace.
    for (int r = 0; r < 16; ++r) {
        for (int c = 0; c < 16; ++c) {
            if (!survives_parity_check(r) || !survives_parity_check(c)) {
                joint(r, c) = 0.0;
            }
        }
    }
    const double pass = joint.trace().real();
    ParityCheckResult result;
    result.pass_probability = pass;
    if (pass > kAlgebraTol) {
        result.kept_state = DensityOperator(Sector::BellPair, joint / pass);
    }
    return result;
}

std::string to_string(SigmaXOutcome o) { return o == SigmaXOutcome::Plus ? "+x" : "-x"; }

std::vector<SigmaXBranch> enumerate_sigma_x_branches(const DensityOperator& four_photon) {
    require_sector(four_photon, Sector::BellPair, "enumerate_sigma_x_branches");
    std::vector<SigmaXBranch> branches;
    branches.reserve(4);
    for (SigmaXOutcome a : {SigmaXOutcome::Plus, SigmaXOutcome::Minus}) {
        for (SigmaXOutcome b : {SigmaXOutcome::Plus, SigmaXOutcome::Minus}) {
            const Eigen::MatrixXcd m = sigma_x_projection(a, b);
            Matrix kept = m * four_photon.mat * m.adjoint();
            SigmaXBranch branch;
            branch.outcome = {a, b};
            branch.probability = std::max(kept.trace().real(), 0.0);
            if (branch.probability > kAlgebraTol) {
                DensityOperator pair(Sector::Bell, kept / branch.probability);
                if (!branch.outcome.parallel()) {
                    pair = apply_phase_flip(pair, Photon::A);
                }
                branch.kept = std::move(pair);
            }
            branches.push_back(std::move(branch));
        }
    }
    return branches;
}

std::pair<MeasurementOutcome, DensityOperator> measure_sigma_x_and_correct(
    const DensityOperator& four_photon, std::mt19937_64& rng) {
    const auto branches = enumerate_sigma_x_branches(four_photon);
    const double u = uniform01(rng);
    double cumulative = 0.0;
    for (const auto& branch : branches) {
        cumulative += branch.probability;
        if (u < cumulative && branch.kept) {
            return {branch.outcome, *branch.kept};
        }
    }
    // Fall back to the last nonempty branch (u landed in rounding slack).
    for (auto it = branches.rbegin(); it != branches.rend(); ++it) {
        if (it->kept) {
            return {it->outcome, *it->kept};
        }
    }
    throw std::logic_error("measure_sigma_x_and_correct: no branch has positive probability");
}

DensityOperator sigma_x_branch_average(const DensityOperator& four_photon) {
    const auto branches = enumerate_sigma_x_branches(four_photon);
    Matrix avg = Matrix::Zero(4, 4);
    double total = 0.0;
    for (const auto& branch : branches) {
        if (branch.kept) {
            avg += branch.probability * branch.kept->mat;
            total += branch.probability;
        }
    }
    if (total <= kAlgebraTol) {
        throw std::logic_error("sigma_x_branch_average: no branch has positive probability");
    }
    return DensityOperator(Sector::Bell, avg / total);
}

}  // namespace depsim
