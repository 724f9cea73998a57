#pragma once

// Declarative circuit description: initial states, a gate list, and homodyne
// measurements, parsed from JSON with record-level error loci. Measurements
// remove their mode; later measurement records use post-removal indices.

#include "covsim/measurement.hpp"
#include "covsim/serialize.hpp"
#include "covsim/states.hpp"
#include "covsim/unitaries.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace covsim {

struct VacuumInit {};
struct CoherentInit {
    double re = 0.0;
    double im = 0.0;
};
struct ThermalInit {
    double nbar = 0.0;
};
struct SqueezedInit {
    double r = 0.0;
    double theta = 0.0;
};
struct TmsvInit {  // occupies two consecutive mode slots
    double r = 0.0;
    double theta = 0.0;
};
using InitialState = std::variant<VacuumInit, CoherentInit, ThermalInit, SqueezedInit, TmsvInit>;

struct DisplaceGate {
    int mode = 0;
    double re = 0.0;
    double im = 0.0;
};
struct PhaseGate {
    int mode = 0;
    double phi = 0.0;
};
struct BeamsplitterGate {
    int mode_a = 0;
    int mode_b = 0;
    double eta = 0.0;
};
struct SqueezeGate {
    int mode = 0;
    double r = 0.0;
    double theta = 0.0;
};
struct TwoModeSqueezeGate {
    int mode_a = 0;
    int mode_b = 0;
    double r = 0.0;
    double theta = 0.0;
};
using GateRecord =
    std::variant<DisplaceGate, PhaseGate, BeamsplitterGate, SqueezeGate, TwoModeSqueezeGate>;

struct MeasurementRecord {
    int mode = 0;  // post-removal index at this record's position
    double phi = 0.0;
    std::optional<double> outcome;      // fixed outcome: condition instead of sampling
    std::optional<std::uint64_t> seed;  // overrides the derived per-record seed
};

struct CircuitSpec {
    int modes = 0;
    std::vector<InitialState> initial;
    std::vector<GateRecord> ops;
    std::vector<MeasurementRecord> measurements;
};

namespace detail {

inline int gate_mode(const json& rec, const char* key, int modes, const std::string& locus) {
    const int mode = require_int(require_key(rec, key, locus), locus + "." + key);
    if (mode < 0 || mode >= modes) {
        throw std::invalid_argument(locus + "." + key + ": mode " + std::to_string(mode) +
                                    " out of range [0, " + std::to_string(modes) + ")");
    }
    return mode;
}

inline std::pair<int, int> gate_mode_pair(const json& rec, int modes, const std::string& locus) {
    const json& arr = require_key(rec, "modes", locus);
    if (!arr.is_array() || arr.size() != 2) {
        throw std::invalid_argument(locus + ".modes: expected an array of two mode indices");
    }
    const int a = require_int(arr.at(0), locus + ".modes[0]");
    const int b = require_int(arr.at(1), locus + ".modes[1]");
    for (int m : {a, b}) {
        if (m < 0 || m >= modes) {
            throw std::invalid_argument(locus + ".modes: mode " + std::to_string(m) +
                                        " out of range [0, " + std::to_string(modes) + ")");
        }
    }
    if (a == b) {
        throw std::invalid_argument(locus + ".modes: modes must be distinct");
    }
    return {a, b};
}

inline InitialState parse_initial(const json& rec, const std::string& locus) {
    if (!rec.is_object()) {
        throw std::invalid_argument(locus + ": expected an object");
    }
    const json& type = require_key(rec, "type", locus);
    if (!type.is_string()) {
        throw std::invalid_argument(locus + ".type: expected a string");
    }
    const std::string kind = type.get<std::string>();
    if (kind == "vacuum") {
        reject_unknown_keys(rec, {"type"}, locus);
        return VacuumInit{};
    }
    if (kind == "coherent") {
        reject_unknown_keys(rec, {"type", "re", "im"}, locus);
        return CoherentInit{require_number(require_key(rec, "re", locus), locus + ".re"),
                            require_number(require_key(rec, "im", locus), locus + ".im")};
    }
    if (kind == "thermal") {
        reject_unknown_keys(rec, {"type", "nbar"}, locus);
        const double nbar = require_number(require_key(rec, "nbar", locus), locus + ".nbar");
        if (nbar < 0.0) {
            throw std::invalid_argument(locus + ".nbar: must be >= 0");
        }
        return ThermalInit{nbar};
    }
    if (kind == "squeezed") {
        reject_unknown_keys(rec, {"type", "r", "theta"}, locus);
        return SqueezedInit{require_number(require_key(rec, "r", locus), locus + ".r"),
                            require_number(require_key(rec, "theta", locus), locus + ".theta")};
    }
    if (kind == "tmsv") {
        reject_unknown_keys(rec, {"type", "r", "theta"}, locus);
        return TmsvInit{require_number(require_key(rec, "r", locus), locus + ".r"),
                        require_number(require_key(rec, "theta", locus), locus + ".theta")};
    }
    throw std::invalid_argument(locus + ".type: unknown state constructor '" + kind + "'");
}

inline GateRecord parse_gate(const json& rec, int modes, const std::string& locus) {
    if (!rec.is_object()) {
        throw std::invalid_argument(locus + ": expected an object");
    }
    const json& type = require_key(rec, "type", locus);
    if (!type.is_string()) {
        throw std::invalid_argument(locus + ".type: expected a string");
    }
    const std::string kind = type.get<std::string>();
    if (kind == "displace") {
        reject_unknown_keys(rec, {"type", "mode", "re", "im"}, locus);
        return DisplaceGate{gate_mode(rec, "mode", modes, locus),
                            require_number(require_key(rec, "re", locus), locus + ".re"),
                            require_number(require_key(rec, "im", locus), locus + ".im")};
    }
    if (kind == "phase") {
        reject_unknown_keys(rec, {"type", "mode", "phi"}, locus);
        return PhaseGate{gate_mode(rec, "mode", modes, locus),
                         require_number(require_key(rec, "phi", locus), locus + ".phi")};
    }
    if (kind == "beamsplitter") {
        reject_unknown_keys(rec, {"type", "modes", "eta"}, locus);
        const auto [a, b] = gate_mode_pair(rec, modes, locus);
        const double eta = require_number(require_key(rec, "eta", locus), locus + ".eta");
        if (!(eta >= 0.0 && eta <= 1.0)) {
            throw std::invalid_argument(locus + ".eta: transmittivity must lie in [0, 1]");
        }
        return BeamsplitterGate{a, b, eta};
    }
    if (kind == "squeeze") {
        reject_unknown_keys(rec, {"type", "mode", "r", "theta"}, locus);
        return SqueezeGate{gate_mode(rec, "mode", modes, locus),
                           require_number(require_key(rec, "r", locus), locus + ".r"),
                           require_number(require_key(rec, "theta", locus), locus + ".theta")};
    }
    if (kind == "tmsqueeze") {
        reject_unknown_keys(rec, {"type", "modes", "r", "theta"}, locus);
        const auto [a, b] = gate_mode_pair(rec, modes, locus);
        return TwoModeSqueezeGate{a, b,
                                  require_number(require_key(rec, "r", locus), locus + ".r"),
                                  require_number(require_key(rec, "theta", locus), locus + ".theta")};
    }
    throw std::invalid_argument(locus + ".type: unknown gate '" + kind + "'");
}

inline MeasurementRecord parse_measurement(const json& rec, int modes_left,
                                           const std::string& locus) {
    if (!rec.is_object()) {
        throw std::invalid_argument(locus + ": expected an object");
    }
    reject_unknown_keys(rec, {"mode", "phi", "outcome", "seed"}, locus);
    if (modes_left < 1) {
        throw std::invalid_argument(locus + ": no modes left to measure");
    }
    MeasurementRecord out;
    out.mode = require_int(require_key(rec, "mode", locus), locus + ".mode");
    if (out.mode < 0 || out.mode >= modes_left) {
        throw std::invalid_argument(locus + ".mode: mode " + std::to_string(out.mode) +
                                    " out of range [0, " + std::to_string(modes_left) +
                                    ") (indices are post-removal)");
    }
    out.phi = require_number(require_key(rec, "phi", locus), locus + ".phi");
    if (rec.contains("outcome")) {
        out.outcome = require_number(rec.at("outcome"), locus + ".outcome");
    }
    if (rec.contains("seed")) {
        out.seed = require_u64(rec.at("seed"), locus + ".seed");
    }
    return out;
}

inline int slot_count(const InitialState& init) {
    return std::holds_alternative<TmsvInit>(init) ? 2 : 1;
}

}  // namespace detail

inline CircuitSpec circuit_from_json(const json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("circuit: expected a JSON object");
    }
    detail::reject_unknown_keys(j, {"modes", "initial", "ops", "measurements"}, "circuit");
    CircuitSpec spec;
    spec.modes = detail::require_int(detail::require_key(j, "modes", "circuit"), "modes");
    if (spec.modes < 1) {
        throw std::invalid_argument("modes: must be >= 1");
    }
    const json& initial = detail::require_key(j, "initial", "circuit");
    if (!initial.is_array()) {
        throw std::invalid_argument("initial: expected an array");
    }
    int slots = 0;
    for (std::size_t i = 0; i < initial.size(); ++i) {
        spec.initial.push_back(
            detail::parse_initial(initial.at(i), "initial[" + std::to_string(i) + "]"));
        slots += detail::slot_count(spec.initial.back());
    }
    if (slots != spec.modes) {
        throw std::invalid_argument("initial: state constructors cover " + std::to_string(slots) +
                                    " modes but the circuit declares " +
                                    std::to_string(spec.modes));
    }
    if (j.contains("ops")) {
        const json& ops = j.at("ops");
        if (!ops.is_array()) {
            throw std::invalid_argument("ops: expected an array");
        }
        for (std::size_t i = 0; i < ops.size(); ++i) {
            spec.ops.push_back(
                detail::parse_gate(ops.at(i), spec.modes, "ops[" + std::to_string(i) + "]"));
        }
    }
    if (j.contains("measurements")) {
        const json& meas = j.at("measurements");
        if (!meas.is_array()) {
            throw std::invalid_argument("measurements: expected an array");
        }
        for (std::size_t i = 0; i < meas.size(); ++i) {
            spec.measurements.push_back(detail::parse_measurement(
                meas.at(i), spec.modes - static_cast<int>(i),
                "measurements[" + std::to_string(i) + "]"));
        }
    }
    return spec;
}

inline CircuitSpec parse_circuit(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& err) {
        throw std::invalid_argument("circuit: " + std::string(err.what()));
    }
    return circuit_from_json(j);
}

struct MeasurementLogEntry {
    std::size_t record_index = 0;
    int mode = 0;
    double phi = 0.0;
    double outcome = 0.0;
    double dist_mean = 0.0;
    double dist_var = 0.0;
    bool sampled = false;
    std::uint64_t seed = 0;  // seed actually used when sampled
};

struct RunResult {
    GaussianState state;
    std::vector<MeasurementLogEntry> log;
};

namespace detail {

inline GaussianState build_initial(const CircuitSpec& spec) {
    std::optional<GaussianState> state;
    for (const InitialState& init : spec.initial) {
        GaussianState next = std::visit(
            [](const auto& s) -> GaussianState {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, VacuumInit>) {
                    return vacuum(1);
                } else if constexpr (std::is_same_v<T, CoherentInit>) {
                    return coherent({s.re, s.im});
                } else if constexpr (std::is_same_v<T, ThermalInit>) {
                    return thermal(s.nbar);
                } else if constexpr (std::is_same_v<T, SqueezedInit>) {
                    return squeezed_vacuum(s.r, s.theta);
                } else {
                    return two_mode_squeezed_vacuum(s.r, s.theta);
                }
            },
            init);
        state = state ? tensor(*state, next) : next;
    }
    return *state;
}

inline SymplecticOp build_gate(const GateRecord& gate, int modes) {
    return std::visit(
        [modes](const auto& g) -> SymplecticOp {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, DisplaceGate>) {
                Eigen::VectorXcd alphas(1);
                alphas(0) = std::complex<double>(g.re, g.im);
                return embed(displacement(alphas), {{g.mode}, modes});
            } else if constexpr (std::is_same_v<T, PhaseGate>) {
                return embed(phase_shift(g.phi), {{g.mode}, modes});
            } else if constexpr (std::is_same_v<T, BeamsplitterGate>) {
                return embed(beamsplitter(g.eta), {{g.mode_a, g.mode_b}, modes});
            } else if constexpr (std::is_same_v<T, SqueezeGate>) {
                return embed(squeeze(g.r, g.theta), {{g.mode}, modes});
            } else {
                return embed(two_mode_squeeze(g.r, g.theta), {{g.mode_a, g.mode_b}, modes});
            }
        },
        gate);
}

}  // namespace detail

/// Execute initial states, gates, and measurements in order. Sampled
/// measurements use per_record_seed(master_seed, record_index) unless the
/// record pins its own seed.
inline RunResult run_circuit(const CircuitSpec& spec, std::uint64_t master_seed) {
    GaussianState state = detail::build_initial(spec);
    for (const GateRecord& gate : spec.ops) {
        state = apply(state, detail::build_gate(gate, spec.modes));
    }
    RunResult result{std::move(state), {}};
    for (std::size_t i = 0; i < spec.measurements.size(); ++i) {
        const MeasurementRecord& rec = spec.measurements[i];
        const std::string locus = "measurements[" + std::to_string(i) + "]";
        try {
            MeasurementLogEntry entry;
            entry.record_index = i;
            entry.mode = rec.mode;
            entry.phi = rec.phi;
            const QuadratureDistribution dist =
                homodyne_distribution(result.state, rec.mode, rec.phi);
            entry.dist_mean = dist.mean;
            entry.dist_var = dist.variance;
            if (rec.outcome) {
                entry.outcome = *rec.outcome;
                entry.sampled = false;
                if (dist.variance < kDegenerateVarTol) {
                    throw std::runtime_error("measured quadrature variance is degenerate");
                }
                result.state = result.state.n_modes() == 1
                                   ? GaussianState::empty()
                                   : homodyne_condition(result.state, rec.mode, rec.phi,
                                                        *rec.outcome);
            } else {
                entry.sampled = true;
                entry.seed = rec.seed ? *rec.seed : per_record_seed(master_seed, i);
                HomodyneResult sampled =
                    sample_homodyne(result.state, rec.mode, rec.phi, entry.seed);
                entry.outcome = sampled.outcome;
                result.state = std::move(sampled.conditional);
            }
            result.log.push_back(entry);
        } catch (const std::runtime_error& err) {
            throw std::runtime_error(locus + ": " + err.what());
        } catch (const std::invalid_argument& err) {
            throw std::invalid_argument(locus + ": " + err.what());
        }
    }
    return result;
}

}  // namespace covsim
