#pragma once

#include <istream>
#include <string>

#include "usim/model/types.hpp"

namespace usim {

enum class DatasetFormat { kCanonical, kKdd19Like, kTiangongLike };

DatasetFormat dataset_format_from_string(const std::string& name);

// Maps an external layout onto the canonical schema. Unknown source fields
// are preserved in the extensions bag. See README for the two external
// layouts accepted here.
Dataset import_dataset(DatasetFormat format, std::istream& payload,
                       const std::string& name = "dataset");

}  // namespace usim
