#pragma once

#include <istream>
#include <ostream>

#include "usim/click/params.hpp"

namespace usim::click {

// Versioned line-delimited JSON: a header line with the model name, scalar
// hyperparameters and defaults, then one line per table entry.
void write_params(std::ostream& out, const ClickModelParams& params);
ClickModelParams read_params(std::istream& in);

}  // namespace usim::click
