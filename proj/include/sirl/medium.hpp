#pragma once

#include <iosfwd>
#include <vector>

#include "sirl/grid.hpp"

namespace sirl {

struct MediumConfig {
  double deposit_amount = 1.0;  // amount left per deposit in the labeled area
  double discount = 0.9;        // multiplicative discount at unlabeled cells
  double diffusion_rate = 0.2;  // fraction of a fresh deposit spread to Moore neighbors
  double decay_rate = 0.1;      // per-phase decay at occupied cells
  int sense_radius = 3;         // Chebyshev sensing radius

  void validate() const;
};

struct SensedCell {
  Cell cell;
  double amount = 0.0;
};

// Scalar digital-pheromone field. Cell amounts stay non-negative; dimensions
// are fixed at construction.
class PheromoneMap {
 public:
  PheromoneMap(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }

  bool in_grid(const Cell& c) const {
    return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
  }

  double amount(const Cell& c) const { return amounts_[index(c)]; }
  double total_mass() const;

  // A deposit at a labeled cell adds deposit_amount, keeps
  // (1 - diffusion_rate) of it in place and spreads the rest equally over the
  // 8 Moore neighbors; the share of off-grid neighbors is lost. At an
  // unlabeled cell the existing amount is discounted instead and nothing
  // diffuses. Throws std::out_of_range for an off-grid position.
  void deposit(const Cell& pos, bool labeled, const MediumConfig& cfg);

  // Multiplies the amount at each occupied cell by (1 - decay_rate).
  void decay_occupied(const std::vector<Cell>& occupied, const MediumConfig& cfg);

  // All pheromone-positive cells within Chebyshev distance sense_radius of
  // pos, excluding pos itself, in row-major order.
  std::vector<SensedCell> sense(const Cell& pos, const MediumConfig& cfg) const;
  void sense(const Cell& pos, const MediumConfig& cfg,
             std::vector<SensedCell>& out) const;

  void clear();

  // P2 graymap snapshot, amounts scaled linearly so the maximum maps to 255.
  void write_pgm(std::ostream& os) const;

 private:
  int index(const Cell& c) const { return c.y * width_ + c.x; }

  int width_;
  int height_;
  std::vector<double> amounts_;
};

}  // namespace sirl
