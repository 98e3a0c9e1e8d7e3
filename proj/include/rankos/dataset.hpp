#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rankos {

// A dataset read from CSV. When an x column is present the rows are sorted
// by x and the responses are mapped onto the midpoint design grid in that
// order; the tests themselves always run on the implicit midpoint grid.
struct Dataset {
  std::vector<double> y;
  std::vector<double> x;  // empty when the file has no x column
  bool x_projected = false;
  std::string digest;  // fnv1a-64 over the parsed response bytes
};

// Header must name a y column; an x column is optional. Duplicate x values
// and non-finite responses are rejected.
Dataset load_dataset_csv(std::istream& is);
Dataset load_dataset_file(const std::string& path);

}  // namespace rankos
