#pragma once

#include <string>

#include "sdasel/decoder.hpp"
#include "sdasel/estimator.hpp"
#include "sdasel/model.hpp"
#include "sdasel/theory.hpp"

namespace sdasel {

// JSON documents are returned as text; non-finite numbers are written as null.
// Field layouts are listed in docs/schemas.md.

std::string fit_to_json(const SdaFit& fit, int indent = 2);
std::string decoder_to_json(const DecoderResult& result, int indent = 2);
std::string theory_to_json(const TheoryReport& report, int indent = 2);
std::string model_to_json(const GaussianLdaModel& model, int indent = 2);

/// Reads the fields written by fit_to_json; only v_hat is required.
SdaFit fit_from_json(const std::string& text);

/// Accepts either an explicit model
///   {"mu1": [...], "mu2": [...], "sigma": [[...], ...], "pi1": .5, "pi2": .5}
/// or a generated one
///   {"p": 100, "s": 5, "covariance": {"kind": "block_embedded", "block_kind": "equal_correlation", "rho": 0.5},
///    "means": {"scheme": "random_sign", "magnitude": 1} | {"mu": [...]},
///    "priors": {"pi1": .5, "pi2": .5}, "seed": 7}
GaussianLdaModel model_from_json(const std::string& text);

}  // namespace sdasel
