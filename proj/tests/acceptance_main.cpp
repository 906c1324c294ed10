// Acceptance suite: runs every release criterion end to end and prints one
// PASS/FAIL line per criterion. Needs the path to the command-line binary
// for the determinism checks:
//
//   depsim_acceptance --cli /path/to/depsim
//
// Exit code 0 iff every criterion passes.
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "depsim/montecarlo.hpp"
#include "depsim/protocol.hpp"

namespace fs = std::filesystem;
using namespace depsim;

namespace {

struct Checker {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
    void expect_near(double value, double target, double tol, const std::string& what) {
        std::ostringstream os;
        os << what << " (got " << value << ", want " << target << " within " << tol << ")";
        expect(std::abs(value - target) <= tol, os.str());
    }
};

const std::vector<double> kGrid = {0.0, 0.125, 0.2, 0.5, 0.8, 0.95, 1.0};

std::string cli_path;
fs::path work_dir;

int run_cli(const std::string& args) {
    const std::string cmd = "\"" + cli_path + "\" " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status)) {
        return -1;
    }
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

double elapsed_seconds(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// 1. Step-1 circuit reproduces weights ((4F+3)/7, 4(1-F)/7) at yield 1.
void criterion_step1_weights(Checker& c) {
    const auto start = std::chrono::steady_clock::now();
    const PureState phi_plus = make_basis_state(DepsClass::PhiPlus);
    const PureState phi_minus = make_basis_state(DepsClass::PhiMinus);
    for (double f : kGrid) {
        const Step1Result r = step1_correct(werner_state(f));
        c.expect(r.yield == 1.0, "yield not exactly 1 at F=" + std::to_string(f));
        c.expect_near(fidelity(r.state, phi_plus), (4.0 * f + 3.0) / 7.0, 1e-12,
                      "Phi+ weight at F=" + std::to_string(f));
        c.expect_near(fidelity(r.state, phi_minus), 4.0 * (1.0 - f) / 7.0, 1e-12,
                      "Phi- weight at F=" + std::to_string(f));
    }
    c.expect(elapsed_seconds(start) < 1.0, "runtime exceeded 1 s");
}

// 2. Exact two-pair circuit equals the closed form (4F+3)^2/(32F^2-8F+25).
void criterion_circuit_formula(Checker& c) {
    const auto start = std::chrono::steady_clock::now();
    for (double f : kGrid) {
        const Step1Result s1 = step1_correct(werner_state(f));
        const ConversionResult conv = wavelength_convert(s1.state, 1.0);
        const Step2Result s2 = step2_purify(conv.state);
        const double closed = (4.0 * f + 3.0) * (4.0 * f + 3.0) /
                              (32.0 * f * f - 8.0 * f + 25.0);
        c.expect_near(s2.output_fidelity, closed, 1e-12,
                      "circuit vs formula at F=" + std::to_string(f));
    }
    c.expect(elapsed_seconds(start) < 1.0, "runtime exceeded 1 s");
}

// 3. Threshold F > 1/8 and convergence from F0 = 0.2 by round 6.
void criterion_threshold(Checker& c) {
    for (double f : {0.13, 0.2, 0.5}) {
        c.expect(fidelity_recursion(f) > (4.0 * f + 3.0) / 7.0,
                 "no gain above threshold at F=" + std::to_string(f));
    }
    for (double f : {0.05, 0.1}) {
        c.expect(fidelity_recursion(f) < (4.0 * f + 3.0) / 7.0,
                 "no loss below threshold at F=" + std::to_string(f));
    }
    c.expect_near(fidelity_recursion(0.125), (4.0 * 0.125 + 3.0) / 7.0, 1e-12,
                  "fixed point at F=1/8");

    // independent oracle: iterate p -> p^2/(p^2+(1-p)^2) from p0 = 3.8/7
    double p = 3.8 / 7.0;
    const PurificationTrace trace = iterate(0.2, 6, 1.0);
    c.expect_near(trace.rounds[0].fidelity, p, 1e-12, "round-0 sector weight");
    for (int k = 1; k <= 6; ++k) {
        p = p * p / (p * p + (1.0 - p) * (1.0 - p));
        c.expect_near(trace.rounds[static_cast<std::size_t>(k)].fidelity, p, 1e-12,
                      "round-" + std::to_string(k) + " fidelity vs oracle");
    }
    c.expect(trace.rounds[6].fidelity > 0.99, "fidelity not above 0.99 by round 6");
}

// 4. Crossed pairs are excluded exactly; identical pairs pass at 1/2.
void criterion_crossed_pairs(Checker& c) {
    const DensityOperator phi_plus = projector(make_bell_state(BellClass::PhiPlus));
    const DensityOperator phi_minus = projector(make_bell_state(BellClass::PhiMinus));
    const auto rotate = [](const DensityOperator& rho) {
        return apply_hadamard(apply_hadamard(rho, Photon::A), Photon::B);
    };
    const DensityOperator r_plus = rotate(phi_plus);    // stays Phi+
    const DensityOperator r_minus = rotate(phi_minus);  // becomes Psi+
    c.expect_near(parity_check_postselect(r_plus, r_minus).pass_probability, 0.0, 1e-12,
                  "crossed-pair pass probability");
    c.expect_near(parity_check_postselect(r_plus, r_plus).pass_probability, 0.5, 1e-12,
                  "same-class (Phi+) pass probability");
    c.expect_near(parity_check_postselect(r_minus, r_minus).pass_probability, 0.5, 1e-12,
                  "same-class (Psi+) pass probability");
}

// 5. Monte Carlo round-1 estimates bracket 25/29 and 29/98 at F0 = 0.5.
void criterion_monte_carlo(Checker& c) {
    const auto start = std::chrono::steady_clock::now();
    const auto stats = mc::run_experiment(0.5, 1, 100000, mc::SeedSpec{1});
    const auto& round1 = stats[1];
    c.expect(round1.kept > 0, "no kept pairs");
    c.expect_near(round1.fidelity_estimate, 25.0 / 29.0, 3.0 * round1.standard_error,
                  "round-1 fidelity estimate");
    const double pass_rate =
        static_cast<double>(round1.kept) / static_cast<double>(round1.trials);
    const double pass_truth = 29.0 / 98.0;
    const double sigma =
        std::sqrt(pass_truth * (1.0 - pass_truth) / static_cast<double>(round1.trials));
    c.expect_near(pass_rate, pass_truth, 3.0 * sigma, "round-1 pass rate");
    c.expect(elapsed_seconds(start) < 10.0, "runtime exceeded 10 s");
}

// 6. Correcting scheme yields 1; discarding baseline yields F + (1-F)/7.
void criterion_efficiency(Checker& c) {
    for (double f : kGrid) {
        const SchemeComparison cmp = compare_schemes(f);
        c.expect(cmp.corrected_yield == 1.0, "corrected yield not exactly 1");
        c.expect_near(cmp.baseline_yield, f + (1.0 - f) / 7.0, 1e-12,
                      "baseline yield at F=" + std::to_string(f));
    }
    c.expect_near(compare_schemes(0.5).baseline_yield, 0.571429, 1e-6,
                  "baseline yield at F=0.5");
    const auto stats = mc::run_baseline_experiment(0.5, 100000, mc::SeedSpec{1});
    const double yield = static_cast<double>(stats.kept) / static_cast<double>(stats.trials);
    const double truth = 0.5 + 0.5 / 7.0;
    const double sigma = std::sqrt(truth * (1.0 - truth) / 100000.0);
    c.expect_near(yield, truth, 3.0 * sigma, "sampled baseline yield");
}

// 7. Density-operator invariants and purity/branch-probability bookkeeping
// hold after every stage.
void criterion_invariants(Checker& c) {
    const auto check_density = [&c](const DensityOperator& rho, const std::string& stage) {
        c.expect((rho.mat - rho.mat.adjoint()).cwiseAbs().maxCoeff() < 1e-12,
                 stage + ": not Hermitian");
        c.expect(std::abs(rho.mat.trace().real() - 1.0) < 1e-12, stage + ": trace not 1");
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho.mat, Eigen::EigenvaluesOnly);
        c.expect(es.eigenvalues().minCoeff() >= -1e-10, stage + ": negative eigenvalue");
    };
    for (double f : kGrid) {
        const std::string tag = " at F=" + std::to_string(f);
        const DensityOperator w = werner_state(f);
        check_density(w, "werner" + tag);

        const DensityOperator routed = project_onto_port_blocks(w);
        check_density(routed, "routing" + tag);
        const DensityOperator corrected = apply_conditional_hwp(routed);
        check_density(corrected, "hwp" + tag);
        // The HWP stage is unitary on each port block: every class state
        // stays pure through it. (On cross-block mixtures it concentrates
        // weight onto the Phi pair by design, so purity rises there.)
        for (DepsClass cls : kAllDepsClasses) {
            const DensityOperator pure_in = projector(make_basis_state(cls));
            const DensityOperator pure_out = apply_conditional_hwp(pure_in);
            c.expect(std::abs(pure_out.purity() - 1.0) < 1e-12,
                     "hwp purity drift on " + to_string(cls) + tag);
        }

        const ConversionResult conv = wavelength_convert(corrected, 1.0);
        check_density(conv.state, "conversion" + tag);
        c.expect(std::abs(conv.state.purity() - corrected.purity()) < 1e-12,
                 "conversion purity drift" + tag);

        const DensityOperator rotated =
            apply_hadamard(apply_hadamard(conv.state, Photon::A), Photon::B);
        check_density(rotated, "hadamard" + tag);
        c.expect(std::abs(rotated.purity() - conv.state.purity()) < 1e-12,
                 "hadamard purity drift" + tag);
        c.expect(std::abs(apply_phase_flip(rotated, Photon::A).purity() - rotated.purity()) <
                     1e-12,
                 "phase-flip purity drift" + tag);

        const ParityCheckResult parity = parity_check_postselect(rotated, rotated);
        if (parity.kept_state) {
            check_density(*parity.kept_state, "parity" + tag);
            double total = 0.0;
            for (const auto& branch : enumerate_sigma_x_branches(*parity.kept_state)) {
                total += branch.probability;
                if (branch.kept) {
                    check_density(*branch.kept, "sigma_x branch" + tag);
                }
            }
            c.expect(std::abs(total - 1.0) < 1e-12, "branch probabilities" + tag);
        }
        const Step2Result s2 = step2_purify(conv.state);
        check_density(s2.state, "round output" + tag);
    }
}

// 8. Identical config+seed gives byte-identical CLI output, at any thread
// count; invalid configs exit with code 2 before computing anything.
void criterion_determinism(Checker& c) {
    const fs::path a = work_dir / "run_a.csv";
    const fs::path b = work_dir / "run_b.csv";
    const fs::path parallel = work_dir / "run_threads.csv";
    const std::string base =
        "simulate --f0 0.5 --rounds 3 --engine both --trials 20000 --seed 7";
    c.expect(run_cli(base + " --out " + a.string()) == 0, "simulate run A failed");
    c.expect(run_cli(base + " --out " + b.string()) == 0, "simulate run B failed");
    c.expect(run_cli(base + " --threads 4 --out " + parallel.string()) == 0,
             "simulate threaded run failed");
    const std::string bytes = slurp(a);
    c.expect(!bytes.empty(), "run A produced no output");
    c.expect(bytes == slurp(b), "reruns differ byte for byte");
    c.expect(bytes == slurp(parallel), "thread count changed the output");

    const fs::path ja = work_dir / "run_a.json";
    const fs::path jb = work_dir / "run_b.json";
    c.expect(run_cli(base + " --format json --out " + ja.string()) == 0, "json run A failed");
    c.expect(run_cli(base + " --format json --out " + jb.string()) == 0, "json run B failed");
    c.expect(slurp(ja) == slurp(jb) && !slurp(ja).empty(), "json reruns differ");

    c.expect(run_cli("recursion --f0 1.5") == 2, "out-of-range f0 must exit 2");
    c.expect(run_cli("simulate --f0 0.5 --engine turbo") == 2, "bad engine must exit 2");
    c.expect(run_cli("simulate --f0 0.5 --trials 0") == 2, "zero trials must exit 2");
    c.expect(run_cli("recursion --f0 0.5 --out " + (work_dir / "ok.csv").string()) == 0,
             "valid recursion run must exit 0");
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--cli") {
            cli_path = argv[i + 1];
        }
    }
    if (cli_path.empty()) {
        std::cerr << "usage: depsim_acceptance --cli /path/to/depsim\n";
        return 2;
    }
    work_dir = fs::temp_directory_path() /
               ("depsim_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(work_dir);

    const std::vector<std::pair<std::string, std::function<void(Checker&)>>> criteria = {
        {"step-1 weights ((4F+3)/7, 4(1-F)/7) at yield 1", criterion_step1_weights},
        {"step-2 circuit equals (4F+3)^2/(32F^2-8F+25)", criterion_circuit_formula},
        {"purification threshold F > 1/8 and convergence from F0=0.2", criterion_threshold},
        {"crossed-pair exclusion and 1/2 same-class pass rate", criterion_crossed_pairs},
        {"Monte Carlo agreement at F0=0.5 (25/29, 29/98)", criterion_monte_carlo},
        {"efficiency: corrected yield 1 vs baseline F+(1-F)/7", criterion_efficiency},
        {"density-operator invariants after every stage", criterion_invariants},
        {"byte-identical determinism and exit-code contract", criterion_determinism},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Checker checker;
        try {
            criteria[i].second(checker);
        } catch (const std::exception& e) {
            checker.ok = false;
            checker.detail = std::string("exception: ") + e.what();
        }
        if (checker.ok) {
            std::cout << "PASS  " << (i + 1) << ". " << criteria[i].first << '\n';
        } else {
            ++failures;
            std::cout << "FAIL  " << (i + 1) << ". " << criteria[i].first << ": "
                      << checker.detail << '\n';
        }
    }
    fs::remove_all(work_dir);
    if (failures > 0) {
        std::cout << failures << " of " << criteria.size() << " criteria failed\n";
        return 1;
    }
    std::cout << "all " << criteria.size() << " criteria passed\n";
    return 0;
}
