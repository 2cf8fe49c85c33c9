#pragma once

#include <stdexcept>
#include <string>

namespace osplit {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Reaction substep escaped the configured bound at a specific node.
struct BlowUpError : std::runtime_error {
    int node;
    explicit BlowUpError(int node_, const std::string& what_)
        : std::runtime_error(what_), node(node_) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ConfigError(msg);
}

}  // namespace osplit
