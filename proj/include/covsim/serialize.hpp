#pragma once

// State-dump file format: one JSON object per file holding n_modes, the mean
// vector, the row-major covariance matrix, and a metadata block recording the
// conventions and the RNG id/seed. Serialization is canonical (sorted keys,
// two-space indent, shortest round-trip doubles), so dump -> parse -> dump is
// byte-identical.

#include "covsim/rng.hpp"
#include "covsim/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace covsim {

using nlohmann::json;

inline constexpr const char* kConventionString =
    "hbar=1, vacuum-variance=1/2, ordering=x1 p1 ... xn pn";

struct StateDump {
    GaussianState state;
    json metadata;
};

inline json make_metadata(std::uint64_t seed) {
    return json{{"convention", kConventionString}, {"rng", kRngId}, {"seed", seed}};
}

namespace detail {

inline const json& require_key(const json& obj, const std::string& key, const std::string& locus) {
    if (!obj.contains(key)) {
        throw std::invalid_argument(locus + ": missing required field '" + key + "'");
    }
    return obj.at(key);
}

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                                const std::string& locus) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw std::invalid_argument(locus + ": unknown field '" + item.key() + "'");
        }
    }
}

inline double require_number(const json& value, const std::string& locus) {
    if (!value.is_number()) {
        throw std::invalid_argument(locus + ": expected a number");
    }
    return value.get<double>();
}

inline std::uint64_t require_u64(const json& value, const std::string& locus) {
    if (!value.is_number_unsigned() &&
        !(value.is_number_integer() && value.get<std::int64_t>() >= 0)) {
        throw std::invalid_argument(locus + ": expected a non-negative integer");
    }
    return value.get<std::uint64_t>();
}

inline int require_int(const json& value, const std::string& locus) {
    if (!value.is_number_integer()) {
        throw std::invalid_argument(locus + ": expected an integer");
    }
    return value.get<int>();
}

inline Vector number_array(const json& value, Eigen::Index expected, const std::string& locus) {
    if (!value.is_array()) {
        throw std::invalid_argument(locus + ": expected an array");
    }
    if (static_cast<Eigen::Index>(value.size()) != expected) {
        throw std::invalid_argument(locus + ": expected " + std::to_string(expected) +
                                    " entries, got " + std::to_string(value.size()));
    }
    Vector out(expected);
    for (Eigen::Index i = 0; i < expected; ++i) {
        out(i) = require_number(value.at(static_cast<std::size_t>(i)),
                                locus + "[" + std::to_string(i) + "]");
    }
    return out;
}

}  // namespace detail

inline json state_dump_to_json(const StateDump& dump) {
    const auto& state = dump.state;
    json mean = json::array();
    for (Eigen::Index i = 0; i < state.mean().size(); ++i) {
        mean.push_back(state.mean()(i));
    }
    json cov = json::array();
    for (Eigen::Index r = 0; r < state.cov().rows(); ++r) {
        for (Eigen::Index c = 0; c < state.cov().cols(); ++c) {
            cov.push_back(state.cov()(r, c));
        }
    }
    return json{{"n_modes", state.n_modes()},
                {"mean", std::move(mean)},
                {"cov", std::move(cov)},
                {"metadata", dump.metadata}};
}

inline StateDump state_dump_from_json(const json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("state dump: expected a JSON object");
    }
    detail::reject_unknown_keys(j, {"n_modes", "mean", "cov", "metadata"}, "state dump");
    const int n = detail::require_int(detail::require_key(j, "n_modes", "state dump"), "n_modes");
    if (n < 0) {
        throw std::invalid_argument("n_modes: must be >= 0, got " + std::to_string(n));
    }
    const Vector mean = detail::number_array(j.at("mean"), 2 * n, "mean");
    const Vector cov_flat = detail::number_array(
        detail::require_key(j, "cov", "state dump"), 4 * static_cast<Eigen::Index>(n) * n, "cov");
    Matrix cov(2 * n, 2 * n);
    for (int r = 0; r < 2 * n; ++r) {
        for (int c = 0; c < 2 * n; ++c) {
            cov(r, c) = cov_flat(2 * n * r + c);
        }
    }
    const json& meta = detail::require_key(j, "metadata", "state dump");
    if (!meta.is_object()) {
        throw std::invalid_argument("metadata: expected an object");
    }
    detail::reject_unknown_keys(meta, {"convention", "rng", "seed"}, "metadata");
    if (!detail::require_key(meta, "convention", "metadata").is_string() ||
        !detail::require_key(meta, "rng", "metadata").is_string()) {
        throw std::invalid_argument("metadata: convention and rng must be strings");
    }
    detail::require_u64(detail::require_key(meta, "seed", "metadata"), "metadata.seed");
    try {
        return {GaussianState(mean, cov), meta};
    } catch (const std::invalid_argument& err) {
        throw std::invalid_argument("cov: " + std::string(err.what()));
    }
}

/// Canonical text form: sorted keys, two-space indent, trailing newline.
inline std::string serialize_state_dump(const StateDump& dump) {
    return state_dump_to_json(dump).dump(2) + "\n";
}

inline StateDump parse_state_dump(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& err) {
        throw std::invalid_argument("state dump: " + std::string(err.what()));
    }
    return state_dump_from_json(j);
}

inline void write_state_dump(const std::filesystem::path& path, const StateDump& dump) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    out << serialize_state_dump(dump);
}

inline StateDump read_state_dump(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot open state file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_state_dump(buffer.str());
}

}  // namespace covsim
