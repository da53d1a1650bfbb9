#pragma once

#include <string>

#include "ermfdr/model_space.hpp"

namespace ermfdr {

// CSV with header theta_1,...,theta_d[,weight],risk; the weight column is
// optional (uniform weights when absent).
DiscreteModelSpace load_space_csv(const std::string& path);

// JSON document {"atoms": [[...],...], "weights": [...], "risks": [...]};
// atoms and weights optional.
DiscreteModelSpace load_space_json(const std::string& path);

// Dispatch on the file extension (.csv / .json).
DiscreteModelSpace load_space(const std::string& path);

}  // namespace ermfdr
