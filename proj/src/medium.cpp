#include "sirl/medium.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sirl {

void MediumConfig::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!(deposit_amount > 0.0) || !std::isfinite(deposit_amount)) {
    throw std::invalid_argument("medium: deposit_amount must be positive and finite");
  }
  if (!(discount > 0.0 && discount < 1.0)) {
    throw std::invalid_argument("medium: discount must lie in (0,1)");
  }
  if (!in_unit(diffusion_rate) || !in_unit(decay_rate)) {
    throw std::invalid_argument("medium: rates must lie in [0,1]");
  }
  if (sense_radius < 1) {
    throw std::invalid_argument("medium: sense_radius must be at least 1");
  }
}

PheromoneMap::PheromoneMap(int width, int height)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("PheromoneMap: dimensions must be positive");
  }
  amounts_.assign(static_cast<size_t>(width) * height, 0.0);
}

double PheromoneMap::total_mass() const {
  double sum = 0.0;
  for (double a : amounts_) sum += a;
  return sum;
}

void PheromoneMap::deposit(const Cell& pos, bool labeled, const MediumConfig& cfg) {
  if (!in_grid(pos)) {
    throw std::out_of_range("deposit: position (" + std::to_string(pos.x) + "," +
                            std::to_string(pos.y) + ") outside grid");
  }
  if (!labeled) {
    amounts_[index(pos)] *= cfg.discount;
    return;
  }
  const double kept = cfg.deposit_amount * (1.0 - cfg.diffusion_rate);
  const double share = cfg.deposit_amount * cfg.diffusion_rate / 8.0;
  amounts_[index(pos)] += kept;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const Cell n{pos.x + dx, pos.y + dy};
      if (in_grid(n)) amounts_[index(n)] += share;
    }
  }
}

void PheromoneMap::decay_occupied(const std::vector<Cell>& occupied,
                                  const MediumConfig& cfg) {
  for (const Cell& c : occupied) {
    if (!in_grid(c)) {
      throw std::out_of_range("decay_occupied: cell outside grid");
    }
    amounts_[index(c)] *= 1.0 - cfg.decay_rate;
  }
}

std::vector<SensedCell> PheromoneMap::sense(const Cell& pos,
                                            const MediumConfig& cfg) const {
  std::vector<SensedCell> out;
  sense(pos, cfg, out);
  return out;
}

void PheromoneMap::sense(const Cell& pos, const MediumConfig& cfg,
                         std::vector<SensedCell>& out) const {
  if (!in_grid(pos)) {
    throw std::out_of_range("sense: position outside grid");
  }
  out.clear();
  const int r = cfg.sense_radius;
  const int y0 = std::max(0, pos.y - r), y1 = std::min(height_ - 1, pos.y + r);
  const int x0 = std::max(0, pos.x - r), x1 = std::min(width_ - 1, pos.x + r);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (x == pos.x && y == pos.y) continue;
      const double a = amounts_[y * width_ + x];
      if (a > 0.0) out.push_back({Cell{x, y}, a});
    }
  }
}

void PheromoneMap::clear() {
  std::fill(amounts_.begin(), amounts_.end(), 0.0);
}

void PheromoneMap::write_pgm(std::ostream& os) const {
  double peak = 0.0;
  for (double a : amounts_) peak = std::max(peak, a);
  os << "P2\n" << width_ << " " << height_ << "\n255\n";
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const int v = peak > 0.0
                        ? static_cast<int>(amounts_[y * width_ + x] / peak * 255.0)
                        : 0;
      os << v << (x + 1 < width_ ? ' ' : '\n');
    }
  }
}

}  // namespace sirl
