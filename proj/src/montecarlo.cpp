#include "depsim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "depsim/random.hpp"

namespace depsim::mc {

namespace {

constexpr std::uint8_t kPhiPlus = 0;
constexpr std::uint8_t kPhiMinus = 1;
constexpr std::uint8_t kLost = 2;

// Chunked parallel for over [0, n) with deterministic per-index work.
void parallel_for(std::uint64_t n, unsigned threads, const std::function<void(std::uint64_t)>& body) {
    threads = std::max(1u, threads);
    if (threads == 1 || n < 2 * threads) {
        for (std::uint64_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(threads);
    const std::uint64_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::uint64_t begin = t * chunk;
        const std::uint64_t end = std::min(n, begin + chunk);
        if (begin >= end) {
            break;
        }
        workers.emplace_back([begin, end, &body] {
            for (std::uint64_t i = begin; i < end; ++i) {
                body(i);
            }
        });
    }
    for (auto& w : workers) {
        w.join();
    }
}

McStatistics summarize(std::uint64_t attempts, const std::vector<std::uint8_t>& pool) {
    McStatistics stats;
    stats.trials = attempts;
    stats.kept = pool.size();
    if (stats.kept == 0) {
        stats.fidelity_estimate = std::numeric_limits<double>::quiet_NaN();
        stats.standard_error = std::numeric_limits<double>::quiet_NaN();
        return stats;
    }
    const auto plus = static_cast<std::uint64_t>(
        std::count(pool.begin(), pool.end(), kPhiPlus));
    const double f = static_cast<double>(plus) / static_cast<double>(stats.kept);
    stats.fidelity_estimate = f;
    stats.standard_error = std::sqrt(f * (1.0 - f) / static_cast<double>(stats.kept));
    return stats;
}

std::vector<std::uint8_t> compact_survivors(const std::vector<std::uint8_t>& slots) {
    std::vector<std::uint8_t> pool;
    pool.reserve(slots.size());
    for (std::uint8_t s : slots) {
        if (s != kLost) {
            pool.push_back(s);
        }
    }
    return pool;
}

}  // namespace

std::mt19937_64 SeedSpec::stream(std::uint64_t domain, std::uint64_t index) const {
    // Two mixing rounds spread (master, domain, index) over the seed space.
    std::uint64_t state = master;
    std::uint64_t mixed = splitmix64(state);
    state = mixed ^ (domain * 0x9e3779b97f4a7c15ULL);
    mixed = splitmix64(state);
    state = mixed ^ index;
    return std::mt19937_64(splitmix64(state));
}

DepsClass sample_class(double f, std::mt19937_64& rng) {
    if (!(f >= 0.0 && f <= 1.0)) {
        throw std::domain_error("sample_class: fidelity must lie in [0, 1]");
    }
    const double u = uniform01(rng);
    if (u < f) {
        return DepsClass::PhiPlus;
    }
    // Remaining mass is uniform over the seven error classes.
    const double v = (u - f) / (1.0 - f);
    auto k = static_cast<std::size_t>(v * 7.0);
    k = std::min<std::size_t>(k, 6);
    return kAllDepsClasses[k + 1];
}

Step1Trajectory run_step1_trajectory(DepsClass c) {
    // The HWPs on the lower ports undo the bit flips; the phase sign rides
    // through untouched.
    const DepsClass corrected =
        is_plus_class(c) ? DepsClass::PhiPlus : DepsClass::PhiMinus;
    return {port_signature(c), corrected};
}

BaselineTrajectory run_baseline_step1_trajectory(DepsClass c) {
    const auto ports = port_signature(c);
    return {ports, ports == std::pair{PortId::P1, PortId::P2}};
}

Step2Trajectory run_step2_trajectory(DepsClass c1, DepsClass c2, std::mt19937_64& rng) {
    const auto is_phi = [](DepsClass c) {
        return c == DepsClass::PhiPlus || c == DepsClass::PhiMinus;
    };
    if (!is_phi(c1) || !is_phi(c2)) {
        throw std::invalid_argument("run_step2_trajectory: classes must be Phi+ or Phi-");
    }
    Step2Trajectory traj;
    if (c1 != c2) {
        // Crossed classes never produce a four-mode coincidence.
        return traj;
    }
    traj.pass = uniform01(rng) < 0.5;
    if (!traj.pass) {
        return traj;
    }
    const auto draw = [&rng] {
        return uniform01(rng) < 0.5 ? SigmaXOutcome::Plus : SigmaXOutcome::Minus;
    };
    traj.outcome = MeasurementOutcome{draw(), draw()};
    traj.kept = c1;
    return traj;
}

std::vector<McStatistics> run_experiment(double f0, int rounds, std::uint64_t trials,
                                         const SeedSpec& seed, double eta, unsigned threads) {
    if (trials == 0) {
        throw std::invalid_argument("run_experiment: at least one trial required");
    }
    if (!(f0 >= 0.0 && f0 <= 1.0)) {
        throw std::domain_error("run_experiment: fidelity must lie in [0, 1]");
    }
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::domain_error("run_experiment: efficiency must lie in (0, 1]");
    }
    if (rounds < 0) {
        throw std::domain_error("run_experiment: round count must be nonnegative");
    }

    std::vector<McStatistics> per_round;
    per_round.reserve(static_cast<std::size_t>(rounds) + 1);

    // Round 0: Werner sampling, bit-flip correction (keeps everything),
    // then one conversion attempt per photon.
    std::vector<std::uint8_t> slots(trials, kLost);
    parallel_for(trials, threads, [&](std::uint64_t i) {
        std::mt19937_64 rng = seed.stream(kDomainStep1, i);
        const DepsClass sampled = sample_class(f0, rng);
        const Step1Trajectory traj = run_step1_trajectory(sampled);
        const bool converted_a = uniform01(rng) < eta;
        const bool converted_b = uniform01(rng) < eta;
        if (converted_a && converted_b) {
            slots[i] = traj.corrected == DepsClass::PhiPlus ? kPhiPlus : kPhiMinus;
        }
    });
    std::vector<std::uint8_t> pool = compact_survivors(slots);
    per_round.push_back(summarize(trials, pool));

    for (int r = 1; r <= rounds; ++r) {
        const std::uint64_t attempts = pool.size() / 2;
        std::vector<std::uint8_t> round_slots(attempts, kLost);
        parallel_for(attempts, threads, [&](std::uint64_t j) {
            std::mt19937_64 rng = seed.stream(kDomainRound + static_cast<std::uint64_t>(r), j);
            const DepsClass c1 = pool[2 * j] == kPhiPlus ? DepsClass::PhiPlus : DepsClass::PhiMinus;
            const DepsClass c2 = pool[2 * j + 1] == kPhiPlus ? DepsClass::PhiPlus : DepsClass::PhiMinus;
            const Step2Trajectory traj = run_step2_trajectory(c1, c2, rng);
            if (traj.pass && traj.kept) {
                round_slots[j] = *traj.kept == DepsClass::PhiPlus ? kPhiPlus : kPhiMinus;
            }
        });
        pool = compact_survivors(round_slots);
        per_round.push_back(summarize(attempts, pool));
    }
    return per_round;
}

McStatistics run_baseline_experiment(double f0, std::uint64_t trials, const SeedSpec& seed,
                                     unsigned threads) {
    if (trials == 0) {
        throw std::invalid_argument("run_baseline_experiment: at least one trial required");
    }
    if (!(f0 >= 0.0 && f0 <= 1.0)) {
        throw std::domain_error("run_baseline_experiment: fidelity must lie in [0, 1]");
    }
    std::vector<std::uint8_t> slots(trials, kLost);
    parallel_for(trials, threads, [&](std::uint64_t i) {
        std::mt19937_64 rng = seed.stream(kDomainStep1, i);
        const DepsClass sampled = sample_class(f0, rng);
        if (run_baseline_step1_trajectory(sampled).kept) {
            slots[i] = sampled == DepsClass::PhiPlus ? kPhiPlus : kPhiMinus;
        }
    });
    return summarize(trials, compact_survivors(slots));
}

}  // namespace depsim::mc
