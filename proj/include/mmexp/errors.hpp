// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace mmexp {

/// Invalid or inconsistent configuration value. Maps to CLI exit status 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Degenerate link geometry (coincident endpoints, far-field formula at d = 0).
class GeometryError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Input outside the validity range of a propagation model.
class ModelRangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

class SelectionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class AggregationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mmexp
