#include "cmspectra/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cmspectra {

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) {
    throw std::invalid_argument("DiscreteMeasure: no atoms");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (!std::isfinite(a.location) || !std::isfinite(a.weight)) {
      throw std::invalid_argument("DiscreteMeasure: non-finite atom");
    }
    if (!(a.weight > 0.0) || a.weight > 1.0 + kWeightTolerance) {
      throw std::invalid_argument("DiscreteMeasure: weight outside (0,1]");
    }
    if (i > 0 && !(atoms_[i - 1].location < a.location)) {
      throw std::invalid_argument("DiscreteMeasure: locations must be strictly increasing");
    }
    total += a.weight;
  }
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw std::invalid_argument("DiscreteMeasure: weights do not sum to one");
  }
}

DiscreteMeasure DiscreteMeasure::from_unnormalized(std::vector<Atom> atoms) {
  std::erase_if(atoms, [](const Atom& a) { return !(a.weight > 0.0); });
  if (atoms.empty()) {
    throw std::invalid_argument("DiscreteMeasure: no positive weight");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  std::vector<Atom> merged;
  merged.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (!merged.empty() && merged.back().location == a.location) {
      merged.back().weight += a.weight;
    } else {
      merged.push_back(a);
    }
  }
  double total = 0.0;
  for (const Atom& a : merged) total += a.weight;
  for (Atom& a : merged) a.weight /= total;
  return DiscreteMeasure(std::move(merged));
}

DiscreteMeasure DiscreteMeasure::uniform_on(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("DiscreteMeasure::uniform_on: empty sample");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<Atom> atoms;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    atoms.push_back({sorted[i], static_cast<double>(j - i) / n});
    i = j;
  }
  return DiscreteMeasure(std::move(atoms));
}

DiscreteMeasure DiscreteMeasure::point_mass(double location) {
  return DiscreteMeasure({{location, 1.0}});
}

double DiscreteMeasure::min_location() const { return atoms_.front().location; }
double DiscreteMeasure::max_location() const { return atoms_.back().location; }

double DiscreteMeasure::moment(int k) const {
  double s = 0.0;
  for (const Atom& a : atoms_) {
    if (a.location == 0.0 && k < 0) return std::numeric_limits<double>::infinity();
    s += a.weight * std::pow(a.location, k);
  }
  return s;
}

double DiscreteMeasure::weight_at(double location) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), location,
                             [](const Atom& a, double x) { return a.location < x; });
  return (it != atoms_.end() && it->location == location) ? it->weight : 0.0;
}

double DiscreteMeasure::cdf(double x) const {
  double s = 0.0;
  for (const Atom& a : atoms_) {
    if (a.location > x) break;
    s += a.weight;
  }
  return std::min(s, 1.0);
}

DiscreteMeasure DiscreteMeasure::dilated(double factor) const {
  if (!(factor > 0.0)) {
    throw std::invalid_argument("DiscreteMeasure::dilated: factor must be positive");
  }
  std::vector<Atom> out(atoms_);
  for (Atom& a : out) a.location *= factor;
  return DiscreteMeasure(std::move(out));
}

DiscreteMeasure DiscreteMeasure::normalized_to_unit_mean() const {
  const double m = mean();
  if (!(m > 0.0)) {
    throw std::invalid_argument("DiscreteMeasure: mean must be positive to normalize");
  }
  return dilated(1.0 / m);
}

bool DiscreteMeasure::nonnegative() const {
  return !atoms_.empty() && atoms_.front().location >= 0.0;
}

std::string DiscreteMeasure::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  };
  for (const Atom& a : atoms_) {
    mix(a.location);
    mix(a.weight);
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string DiscreteMeasure::to_string() const {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i) os << ',';
    os << atoms_[i].location << ':' << atoms_[i].weight;
  }
  return os.str();
}

}  // namespace cmspectra
