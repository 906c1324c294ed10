#include "depsim/qstate.hpp"

#include <cmath>
#include <stdexcept>

namespace depsim {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void require(bool cond, const std::string& msg) {
    if (!cond) {
        throw std::invalid_argument(msg);
    }
}

}  // namespace

Photon photon_of(FrequencyLabel f) {
    switch (f) {
        case FrequencyLabel::OmegaS:
        case FrequencyLabel::OmegaSPrime:
            return Photon::A;
        case FrequencyLabel::OmegaI:
        case FrequencyLabel::OmegaIPrime:
            return Photon::B;
    }
    throw std::invalid_argument("unknown frequency label");
}

int frequency_bit(FrequencyLabel f) {
    return (f == FrequencyLabel::OmegaSPrime || f == FrequencyLabel::OmegaIPrime) ? 1 : 0;
}

FrequencyLabel frequency_label(Photon photon, int bit) {
    require(bit == 0 || bit == 1, "frequency bit must be 0 or 1");
    if (photon == Photon::A) {
        return bit ? FrequencyLabel::OmegaSPrime : FrequencyLabel::OmegaS;
    }
    return bit ? FrequencyLabel::OmegaIPrime : FrequencyLabel::OmegaI;
}

std::string to_string(Photon p) { return p == Photon::A ? "a" : "b"; }

std::string to_string(Polarization p) { return p == Polarization::H ? "H" : "V"; }

std::string to_string(FrequencyLabel f) {
    switch (f) {
        case FrequencyLabel::OmegaS: return "omega_s";
        case FrequencyLabel::OmegaSPrime: return "omega_s'";
        case FrequencyLabel::OmegaI: return "omega_i";
        case FrequencyLabel::OmegaIPrime: return "omega_i'";
    }
    return "?";
}

int sector_dim(Sector s) {
    switch (s) {
        case Sector::Deps: return 16;
        case Sector::Bell: return 4;
        case Sector::BellPair: return 16;
    }
    throw std::invalid_argument("unknown sector");
}

std::string to_string(Sector s) {
    switch (s) {
        case Sector::Deps: return "deps";
        case Sector::Bell: return "bell";
        case Sector::BellPair: return "bell-pair";
    }
    return "?";
}

int deps_index(Polarization pol_a, int freq_a, Polarization pol_b, int freq_b) {
    return 8 * static_cast<int>(pol_a) + 4 * freq_a + 2 * static_cast<int>(pol_b) + freq_b;
}

int bell_index(Polarization pol_a, Polarization pol_b) {
    return 2 * static_cast<int>(pol_a) + static_cast<int>(pol_b);
}

bool is_plus_class(DepsClass c) {
    switch (c) {
        case DepsClass::PhiPlus:
        case DepsClass::PsiPlus:
        case DepsClass::GammaPlus:
        case DepsClass::UpsilonPlus:
            return true;
        default:
            return false;
    }
}

DepsClass flip_class_sign(DepsClass c) {
    switch (c) {
        case DepsClass::PhiPlus: return DepsClass::PhiMinus;
        case DepsClass::PhiMinus: return DepsClass::PhiPlus;
        case DepsClass::PsiPlus: return DepsClass::PsiMinus;
        case DepsClass::PsiMinus: return DepsClass::PsiPlus;
        case DepsClass::GammaPlus: return DepsClass::GammaMinus;
        case DepsClass::GammaMinus: return DepsClass::GammaPlus;
        case DepsClass::UpsilonPlus: return DepsClass::UpsilonMinus;
        case DepsClass::UpsilonMinus: return DepsClass::UpsilonPlus;
    }
    throw std::invalid_argument("unknown class");
}

std::string to_string(DepsClass c) {
    switch (c) {
        case DepsClass::PhiPlus: return "Phi+";
        case DepsClass::PhiMinus: return "Phi-";
        case DepsClass::PsiPlus: return "Psi+";
        case DepsClass::PsiMinus: return "Psi-";
        case DepsClass::GammaPlus: return "Gamma+";
        case DepsClass::GammaMinus: return "Gamma-";
        case DepsClass::UpsilonPlus: return "Upsilon+";
        case DepsClass::UpsilonMinus: return "Upsilon-";
    }
    return "?";
}

std::string to_string(BellClass c) {
    switch (c) {
        case BellClass::PhiPlus: return "Phi+";
        case BellClass::PhiMinus: return "Phi-";
        case BellClass::PsiPlus: return "Psi+";
        case BellClass::PsiMinus: return "Psi-";
    }
    return "?";
}

int BasisTerm::flat_index() const {
    return deps_index(pol_a, frequency_bit(freq_a), pol_b, frequency_bit(freq_b));
}

std::pair<BasisTerm, BasisTerm> class_terms(DepsClass c) {
    using P = Polarization;
    using F = FrequencyLabel;
    switch (c) {
        case DepsClass::PhiPlus:
        case DepsClass::PhiMinus:
            return {{P::H, F::OmegaS, P::H, F::OmegaI}, {P::V, F::OmegaSPrime, P::V, F::OmegaIPrime}};
        case DepsClass::PsiPlus:
        case DepsClass::PsiMinus:
            return {{P::H, F::OmegaS, P::V, F::OmegaI}, {P::V, F::OmegaSPrime, P::H, F::OmegaIPrime}};
        case DepsClass::GammaPlus:
        case DepsClass::GammaMinus:
            return {{P::V, F::OmegaS, P::H, F::OmegaI}, {P::H, F::OmegaSPrime, P::V, F::OmegaIPrime}};
        case DepsClass::UpsilonPlus:
        case DepsClass::UpsilonMinus:
            return {{P::V, F::OmegaS, P::V, F::OmegaI}, {P::H, F::OmegaSPrime, P::H, F::OmegaIPrime}};
    }
    throw std::invalid_argument("unknown class");
}

PureState::PureState(Sector s, Vector amplitudes) : sector(s), amp(std::move(amplitudes)) {
    require(amp.size() == sector_dim(sector),
            "pure state dimension does not match sector " + to_string(sector));
    require(std::abs(amp.norm() - 1.0) < kAlgebraTol, "pure state is not normalized");
}

DensityOperator::DensityOperator(Sector s, Matrix m) : sector(s), mat(std::move(m)) {
    const int dim = sector_dim(sector);
    require(mat.rows() == dim && mat.cols() == dim,
            "density operator dimension does not match sector " + to_string(sector));
    require((mat - mat.adjoint()).cwiseAbs().maxCoeff() < kAlgebraTol,
            "density operator is not Hermitian");
    require(std::abs(mat.trace().real() - 1.0) < kAlgebraTol && std::abs(mat.trace().imag()) < kAlgebraTol,
            "density operator trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat, Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() >= -kPsdTol,
            "density operator has a negative eigenvalue");
}

double DensityOperator::purity() const { return (mat * mat).trace().real(); }

PureState make_basis_state(DepsClass c) {
    Vector amp = Vector::Zero(16);
    const auto [t1, t2] = class_terms(c);
    amp(t1.flat_index()) = kInvSqrt2;
    amp(t2.flat_index()) = is_plus_class(c) ? kInvSqrt2 : -kInvSqrt2;
    return PureState(Sector::Deps, std::move(amp));
}

PureState make_bell_state(BellClass c) {
    using P = Polarization;
    Vector amp = Vector::Zero(4);
    switch (c) {
        case BellClass::PhiPlus:
            amp(bell_index(P::H, P::H)) = kInvSqrt2;
            amp(bell_index(P::V, P::V)) = kInvSqrt2;
            break;
        case BellClass::PhiMinus:
            amp(bell_index(P::H, P::H)) = kInvSqrt2;
            amp(bell_index(P::V, P::V)) = -kInvSqrt2;
            break;
        case BellClass::PsiPlus:
            amp(bell_index(P::H, P::V)) = kInvSqrt2;
            amp(bell_index(P::V, P::H)) = kInvSqrt2;
            break;
        case BellClass::PsiMinus:
            amp(bell_index(P::H, P::V)) = kInvSqrt2;
            amp(bell_index(P::V, P::H)) = -kInvSqrt2;
            break;
    }
    return PureState(Sector::Bell, std::move(amp));
}

DensityOperator projector(const PureState& psi) {
    return DensityOperator(psi.sector, psi.amp * psi.amp.adjoint());
}

DensityOperator werner_state(double f) {
    if (!(f >= 0.0 && f <= 1.0)) {
        throw std::domain_error("Werner fidelity must lie in [0, 1]");
    }
    std::vector<std::pair<double, PureState>> components;
    components.reserve(8);
    for (DepsClass c : kAllDepsClasses) {
        const double w = (c == DepsClass::PhiPlus) ? f : (1.0 - f) / 7.0;
        components.emplace_back(w, make_basis_state(c));
    }
    return mix(components);
}

double fidelity(const DensityOperator& rho, const PureState& target) {
    require(rho.sector == target.sector,
            "fidelity: sector mismatch (" + to_string(rho.sector) + " vs " + to_string(target.sector) + ")");
    return (target.amp.adjoint() * rho.mat * target.amp)(0, 0).real();
}

DensityOperator mix(const std::vector<std::pair<double, PureState>>& components) {
    require(!components.empty(), "mix: empty component list");
    const Sector sector = components.front().second.sector;
    const int dim = sector_dim(sector);
    Matrix out = Matrix::Zero(dim, dim);
    double weight_sum = 0.0;
    for (const auto& [w, psi] : components) {
        require(w >= 0.0, "mix: negative weight");
        require(psi.sector == sector, "mix: mixed sectors");
        weight_sum += w;
        out += w * (psi.amp * psi.amp.adjoint());
    }
    require(std::abs(weight_sum - 1.0) < kAlgebraTol, "mix: weights do not sum to 1");
    return DensityOperator(sector, std::move(out));
}

}  // namespace depsim
