// Exact linear-algebra core for photon pairs entangled in polarization and
// frequency: basis conventions, the eight entangled basis classes, Werner
// mixtures, density operators and fidelities.
#pragma once

#include <array>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace depsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Tolerances: algebraic identities at 1e-12, eigenvalue positivity at 1e-10
// (double precision on 16x16 operators).
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
// Support / sector-leak tolerance for protocol preconditions.
inline constexpr double kSupportTol = 1e-10;

enum class Photon { A, B };

enum class Polarization : int { H = 0, V = 1 };

// Transmission frequency labels. Photon a carries omega_s / omega_s',
// photon b carries omega_i / omega_i'. After up-conversion both photons
// share one common frequency; converted states live in the Bell sector,
// which carries no frequency index at all.
enum class FrequencyLabel : int { OmegaS, OmegaSPrime, OmegaI, OmegaIPrime };

Photon photon_of(FrequencyLabel f);
int frequency_bit(FrequencyLabel f);  // 0 = unprimed, 1 = primed
FrequencyLabel frequency_label(Photon photon, int bit);

std::string to_string(Photon p);
std::string to_string(Polarization p);
std::string to_string(FrequencyLabel f);

// State-space tag.
//   Deps:     two photons x (polarization, frequency), dim 16.
//   Bell:     two photons x polarization only (post-conversion), dim 4.
//   BellPair: two Bell pairs ordered (a1, b1, a2, b2), dim 16.
// Deps and BellPair have equal dimension but are distinct spaces; the tag
// prevents silently feeding one where the other is expected.
enum class Sector { Deps, Bell, BellPair };

int sector_dim(Sector s);
std::string to_string(Sector s);

// Flat basis index, ordering (pol_a, freq_a, pol_b, freq_b) with H < V and
// unprimed < primed:  index = 8*pol_a + 4*freq_a + 2*pol_b + freq_b.
int deps_index(Polarization pol_a, int freq_a, Polarization pol_b, int freq_b);
// Bell-sector index = 2*pol_a + pol_b.
int bell_index(Polarization pol_a, Polarization pol_b);

// The eight orthonormal two-photon classes Phi+-, Psi+-, Gamma+-, Upsilon+-.
// Phi carries no bit-flip error; Psi flips photon b, Gamma flips photon a,
// Upsilon flips both. The minus classes carry a phase flip.
enum class DepsClass {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
    GammaPlus,
    GammaMinus,
    UpsilonPlus,
    UpsilonMinus,
};

inline constexpr std::array<DepsClass, 8> kAllDepsClasses = {
    DepsClass::PhiPlus,     DepsClass::PhiMinus,  DepsClass::PsiPlus,
    DepsClass::PsiMinus,    DepsClass::GammaPlus, DepsClass::GammaMinus,
    DepsClass::UpsilonPlus, DepsClass::UpsilonMinus,
};

bool is_plus_class(DepsClass c);
// Same family, opposite phase sign (Phi+ <-> Phi- etc.).
DepsClass flip_class_sign(DepsClass c);
std::string to_string(DepsClass c);

// One product term |pol_a, freq_a>|pol_b, freq_b> of a class.
struct BasisTerm {
    Polarization pol_a;
    FrequencyLabel freq_a;
    Polarization pol_b;
    FrequencyLabel freq_b;

    int flat_index() const;
};

// The two terms of the class superposition. The first term carries
// amplitude +1/sqrt(2); the second +1/sqrt(2) or -1/sqrt(2) per the
// class sign.
std::pair<BasisTerm, BasisTerm> class_terms(DepsClass c);

// Polarization-only Bell classes of the converted (common-frequency) pair.
enum class BellClass { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline constexpr std::array<BellClass, 4> kAllBellClasses = {
    BellClass::PhiPlus,
    BellClass::PhiMinus,
    BellClass::PsiPlus,
    BellClass::PsiMinus,
};

std::string to_string(BellClass c);

// Normalized complex amplitude vector over one of the sectors.
struct PureState {
    Sector sector = Sector::Deps;
    Vector amp;

    PureState() = default;
    // Throws std::invalid_argument unless amp has the sector's dimension
    // and unit norm within 1e-12.
    PureState(Sector sector, Vector amplitudes);
};

// Hermitian, positive semidefinite, trace-one operator on one sector.
struct DensityOperator {
    Sector sector = Sector::Deps;
    Matrix mat;

    DensityOperator() = default;
    // Throws std::invalid_argument if m is not Hermitian within 1e-12,
    // trace-one within 1e-12, or has an eigenvalue below -1e-10.
    DensityOperator(Sector sector, Matrix m);

    double purity() const;  // tr(rho^2)
};

PureState make_basis_state(DepsClass c);
PureState make_bell_state(BellClass c);

DensityOperator projector(const PureState& psi);

// Werner mixture: weight f on Phi+ and (1-f)/7 on each of the seven other
// classes. Throws std::domain_error outside [0, 1].
DensityOperator werner_state(double f);

// <target| rho |target>. Throws std::invalid_argument on sector mismatch.
double fidelity(const DensityOperator& rho, const PureState& target);

// Convex combination of projectors. Weights must be nonnegative and sum to
// one within 1e-12; all components must share a sector.
DensityOperator mix(const std::vector<std::pair<double, PureState>>& components);

}  // namespace depsim
