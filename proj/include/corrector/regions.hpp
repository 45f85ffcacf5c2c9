#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "corrector/problem.hpp"

namespace corrector {

// Per-node classification of a converged solution: which transfer
// constraints bind within tolBind (as an unordered-pair bitmask, zero
// meaning no transaction) plus the potential for plotting.
struct RegionMap {
    Grid grid;
    double aBar = 0.0;
    double tolBind = 0.0;
    std::vector<std::uint8_t> labels;
    Eigen::VectorXd w;
    std::int64_t ntCells = 0;
};

// Validates that the no-transaction region is nonempty, contains the origin
// and is face-connected; throws EmptyNTRegion otherwise.
RegionMap classify_regions(const CorrectorSolution& solution);

// "NT" or sorted '+'-joined pair names like "0/1+1/2".
std::string label_text(int d, std::uint8_t mask);

// Fixed color legend for two-asset maps (white NT, primary colors for
// single constraints, mixes for double bindings, black for all three).
std::array<unsigned char, 3> label_color(std::uint8_t mask);

// CSV with one row per node: coordinates, label, potential, eigenvalue.
void emit_csv(const RegionMap& map, const std::string& path);

// Binary PPM raster, scale x scale pixels per cell, rho1 rightward and
// rho2 upward. Two-asset maps only.
void emit_image(const RegionMap& map, const std::string& path, int scale);

}  // namespace corrector
