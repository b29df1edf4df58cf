#include "pqa/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace pqa {

namespace {

int parity_sign(std::uint32_t bits) {
  return std::popcount(bits) & 1 ? -1 : +1;
}

void check_cap(int n_spins) {
  if (n_spins > kEnumerationCap) {
    std::ostringstream msg;
    msg << "refusing exhaustive enumeration of " << n_spins
        << " spins (hard cap " << kEnumerationCap << ")";
    throw CapacityError(msg.str());
  }
}

// Walks all 2^n configurations in Gray-code order, maintaining the energy
// incrementally: flipping one bit flips the sign of every term containing
// it. visit(config, energy) is called for every configuration.
template <typename Visitor>
void gray_walk(const IsingSystem& system, Visitor&& visit) {
  const int n = system.n_spins();
  const auto& terms = system.terms();
  std::vector<std::vector<int>> terms_by_bit(static_cast<std::size_t>(n));
  for (std::size_t t = 0; t < terms.size(); ++t) {
    for (int b = 0; b < n; ++b) {
      if (terms[t].mask >> b & 1u) terms_by_bit[b].push_back(static_cast<int>(t));
    }
  }
  std::vector<double> signed_weight(terms.size());
  double energy = 0.0;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    signed_weight[t] = terms[t].weight;  // all spins up at config 0
    energy += terms[t].weight;
  }
  visit(0u, energy);
  const std::uint64_t total = std::uint64_t{1} << n;
  std::uint32_t config = 0;
  for (std::uint64_t k = 1; k < total; ++k) {
    const int bit = std::countr_zero(k);
    config ^= (std::uint32_t{1} << bit);
    for (int t : terms_by_bit[bit]) {
      energy -= 2.0 * signed_weight[t];
      signed_weight[t] = -signed_weight[t];
    }
    visit(config, energy);
  }
}

}  // namespace

IsingSystem::IsingSystem(std::vector<int> ids, std::vector<IsingTerm> terms)
    : ids_(std::move(ids)), terms_(std::move(terms)) {
  check_cap(n_spins());
}

int IsingSystem::index_of(int id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return -1;
  return static_cast<int>(it - ids_.begin());
}

IsingSystem IsingSystem::from_constraints(
    std::span<const ParityConstraint> cs) {
  std::set<int> id_set;
  for (const auto& c : cs) id_set.insert(c.members.begin(), c.members.end());
  std::vector<int> ids(id_set.begin(), id_set.end());
  std::vector<IsingTerm> terms;
  terms.reserve(cs.size());
  for (const auto& c : cs) {
    std::uint32_t mask = 0;
    for (int m : c.members) {
      auto it = std::lower_bound(ids.begin(), ids.end(), m);
      mask |= std::uint32_t{1} << (it - ids.begin());
    }
    terms.push_back({mask, c.signed_coefficient()});
  }
  return IsingSystem(std::move(ids), std::move(terms));
}

IsingSystem IsingSystem::from_constraint(const ParityConstraint& c) {
  return from_constraints(std::span<const ParityConstraint>(&c, 1));
}

IsingSystem IsingSystem::from_model(const TwoBodyModel& model) {
  std::vector<int> ids(static_cast<std::size_t>(model.n_spins));
  for (int i = 0; i < model.n_spins; ++i) ids[static_cast<std::size_t>(i)] = i;
  std::map<std::uint32_t, double> accum;
  for (const auto& term : model.pair_terms) {
    accum[(std::uint32_t{1} << term.a) | (std::uint32_t{1} << term.b)] +=
        term.weight;
  }
  for (const auto& term : model.constraint_fields) {
    accum[std::uint32_t{1} << term.site] += term.weight;
  }
  for (const auto& term : model.z_fields) {
    accum[std::uint32_t{1} << term.site] += term.weight;
  }
  std::vector<IsingTerm> terms;
  terms.reserve(accum.size());
  for (const auto& [mask, weight] : accum) terms.push_back({mask, weight});
  return IsingSystem(std::move(ids), std::move(terms));
}

IsingSystem IsingSystem::from_fragment(const TwoBodyModel& model) {
  std::set<int> id_set;
  for (const auto& term : model.pair_terms) {
    id_set.insert(term.a);
    id_set.insert(term.b);
  }
  for (const auto& term : model.constraint_fields) id_set.insert(term.site);
  for (const auto& term : model.z_fields) id_set.insert(term.site);
  std::vector<int> ids(id_set.begin(), id_set.end());
  auto bit_of = [&](int id) {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    return std::uint32_t{1} << (it - ids.begin());
  };
  std::map<std::uint32_t, double> accum;
  for (const auto& term : model.pair_terms) {
    accum[bit_of(term.a) | bit_of(term.b)] += term.weight;
  }
  for (const auto& term : model.constraint_fields) {
    accum[bit_of(term.site)] += term.weight;
  }
  for (const auto& term : model.z_fields) {
    accum[bit_of(term.site)] += term.weight;
  }
  std::vector<IsingTerm> terms;
  terms.reserve(accum.size());
  for (const auto& [mask, weight] : accum) terms.push_back({mask, weight});
  return IsingSystem(std::move(ids), std::move(terms));
}

double IsingSystem::energy(std::uint32_t config) const {
  double energy = 0.0;
  for (const auto& term : terms_) {
    energy += term.weight * parity_sign(config & term.mask);
  }
  return energy;
}

std::vector<SpectrumLine> enumerate_spectrum(const IsingSystem& system) {
  check_cap(system.n_spins());
  std::vector<double> energies;
  energies.reserve(std::size_t{1} << system.n_spins());
  gray_walk(system, [&](std::uint32_t, double e) { energies.push_back(e); });
  std::sort(energies.begin(), energies.end());
  std::vector<SpectrumLine> lines;
  for (double e : energies) {
    if (lines.empty() || e > lines.back().energy + kEnergyTolerance) {
      lines.push_back({e, 1});
    } else {
      ++lines.back().multiplicity;
    }
  }
  return lines;
}

GroundManifoldReport ground_report(const IsingSystem& system,
                                   std::span<const int> marginal_ids) {
  check_cap(system.n_spins());

  double min_energy = std::numeric_limits<double>::infinity();
  gray_walk(system, [&](std::uint32_t, double e) {
    if (e < min_energy) min_energy = e;
  });

  GroundManifoldReport report;
  report.min_energy = min_energy;
  double second = std::numeric_limits<double>::infinity();
  gray_walk(system, [&](std::uint32_t config, double e) {
    if (e <= min_energy + kEnergyTolerance) {
      report.ground_states.push_back(config);
    } else if (e < second) {
      second = e;
    }
  });
  report.gap = std::isinf(second) ? 0.0 : second - min_energy;
  std::sort(report.ground_states.begin(), report.ground_states.end());

  std::vector<int> subset(marginal_ids.begin(), marginal_ids.end());
  std::sort(subset.begin(), subset.end());
  std::vector<int> positions;
  positions.reserve(subset.size());
  for (int id : subset) {
    int pos = system.index_of(id);
    if (pos < 0) {
      throw SchemaError("marginal spin id " + std::to_string(id) +
                        " not present in system");
    }
    positions.push_back(pos);
  }
  std::set<std::uint32_t> marginal;
  for (std::uint32_t g : report.ground_states) {
    std::uint32_t projected = 0;
    for (std::size_t k = 0; k < positions.size(); ++k) {
      projected |= ((g >> positions[k]) & 1u) << k;
    }
    marginal.insert(projected);
  }
  report.marginal_ground.assign(marginal.begin(), marginal.end());
  return report;
}

EquivalenceReport verify_equivalence(const IsingSystem& original,
                                     const IsingSystem& decomposed,
                                     std::span<const int> shared_ids) {
  GroundManifoldReport a = ground_report(original, shared_ids);
  GroundManifoldReport b = ground_report(decomposed, shared_ids);
  EquivalenceReport result;
  result.gap_original = a.gap;
  result.gap_decomposed = b.gap;
  result.ok = a.marginal_ground == b.marginal_ground;
  return result;
}

int gf2_rank(std::span<const std::vector<int>> checks, int n_qubits) {
  const int words = (n_qubits + 63) / 64;
  std::vector<std::vector<std::uint64_t>> pivots;
  int rank = 0;
  for (const auto& check : checks) {
    std::vector<std::uint64_t> row(static_cast<std::size_t>(words), 0);
    for (int id : check) {
      if (id < 0 || id >= n_qubits) {
        throw SchemaError("check references qubit " + std::to_string(id) +
                          " outside [0, " + std::to_string(n_qubits) + ")");
      }
      row[static_cast<std::size_t>(id / 64)] ^= std::uint64_t{1} << (id % 64);
    }
    for (const auto& pivot : pivots) {
      // reduce by the pivot if it shares this row's leading bit
      int lead = -1;
      for (int w = words - 1; w >= 0 && lead < 0; --w) {
        if (pivot[static_cast<std::size_t>(w)]) {
          lead = w * 64 + 63 - std::countl_zero(pivot[static_cast<std::size_t>(w)]);
        }
      }
      if (lead >= 0 && (row[static_cast<std::size_t>(lead / 64)] >>
                        (lead % 64) & 1u)) {
        for (int w = 0; w < words; ++w) {
          row[static_cast<std::size_t>(w)] ^= pivot[static_cast<std::size_t>(w)];
        }
      }
    }
    bool nonzero = false;
    for (int w = 0; w < words; ++w) nonzero |= row[static_cast<std::size_t>(w)] != 0;
    if (nonzero) {
      pivots.push_back(std::move(row));
      ++rank;
    }
  }
  return rank;
}

}  // namespace pqa
