#include "rankos/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rankos {

namespace {

std::string trim_lower(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  s.erase(0, b);
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string fnv1a_digest(const std::vector<double>& values) {
  std::uint64_t h = 1469598103934665603ull;
  for (double v : values) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ull;
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

Dataset load_dataset_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("dataset: empty input");
  std::vector<std::string> header = split_csv(line);
  int x_col = -1, y_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    std::string name = trim_lower(header[i]);
    if (name == "x") x_col = static_cast<int>(i);
    else if (name == "y") y_col = static_cast<int>(i);
    else
      throw std::runtime_error("dataset: unexpected column '" + header[i] +
                               "' (only x and y are understood)");
  }
  if (y_col < 0) throw std::runtime_error("dataset: no y column in header");

  std::vector<double> xs, ys;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells = split_csv(line);
    if (cells.size() != header.size())
      throw std::runtime_error("dataset: row " + std::to_string(lineno) +
                               " has " + std::to_string(cells.size()) +
                               " cells, header has " +
                               std::to_string(header.size()));
    double y;
    try {
      y = std::stod(cells[static_cast<std::size_t>(y_col)]);
    } catch (const std::exception&) {
      throw std::runtime_error("dataset: bad y value at row " +
                               std::to_string(lineno));
    }
    if (!std::isfinite(y))
      throw std::runtime_error("dataset: non-finite y at row " +
                               std::to_string(lineno));
    ys.push_back(y);
    if (x_col >= 0) {
      double x;
      try {
        x = std::stod(cells[static_cast<std::size_t>(x_col)]);
      } catch (const std::exception&) {
        throw std::runtime_error("dataset: bad x value at row " +
                                 std::to_string(lineno));
      }
      if (!std::isfinite(x))
        throw std::runtime_error("dataset: non-finite x at row " +
                                 std::to_string(lineno));
      xs.push_back(x);
    }
  }
  if (ys.size() < 2) throw std::runtime_error("dataset: need at least 2 rows");

  Dataset out;
  if (!xs.empty()) {
    std::vector<std::size_t> order(ys.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    out.x.resize(xs.size());
    out.y.resize(ys.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      out.x[i] = xs[order[i]];
      out.y[i] = ys[order[i]];
    }
    for (std::size_t i = 0; i + 1 < out.x.size(); ++i)
      if (out.x[i] == out.x[i + 1])
        throw std::runtime_error("dataset: duplicate x value " +
                                 std::to_string(out.x[i]));
    out.x_projected = true;
  } else {
    out.y = std::move(ys);
  }
  out.digest = fnv1a_digest(out.y);
  return out;
}

Dataset load_dataset_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("dataset: cannot open " + path);
  return load_dataset_csv(f);
}

}  // namespace rankos
