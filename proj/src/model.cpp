#include "pqa/model.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace pqa {

double classical_energy(const SpinGlassProblem& problem,
                        std::span<const int> spins) {
  if (static_cast<int>(spins.size()) != problem.n_logical) {
    std::ostringstream msg;
    msg << "assignment length " << spins.size() << " does not match N = "
        << problem.n_logical;
    throw SchemaError(msg.str());
  }
  double energy = 0.0;
  for (int i = 1; i <= problem.n_logical; ++i) {
    energy += problem.z_field(i) * spins[static_cast<std::size_t>(i - 1)];
  }
  for (const auto& [pair, j] : problem.couplings) {
    energy += j * spins[static_cast<std::size_t>(pair.first - 1)] *
              spins[static_cast<std::size_t>(pair.second - 1)];
  }
  return energy;
}

void validate_model(const TwoBodyModel& model) {
  auto check_site = [&](int site, const char* what) {
    if (site < 0 || site >= model.n_spins) {
      std::ostringstream msg;
      msg << what << " references spin " << site << " outside [0, "
          << model.n_spins << ")";
      throw VerificationError(msg.str());
    }
  };
  std::set<std::pair<int, int>> seen;
  int sign = 0;
  for (const auto& term : model.pair_terms) {
    check_site(term.a, "pair term");
    check_site(term.b, "pair term");
    if (term.a == term.b) {
      throw VerificationError("pair term couples spin " +
                              std::to_string(term.a) + " to itself");
    }
    auto key = std::minmax(term.a, term.b);
    if (!seen.insert(key).second) {
      throw VerificationError("duplicate pair term (" +
                              std::to_string(key.first) + ", " +
                              std::to_string(key.second) + ")");
    }
    if (term.weight != 0.0) {
      int s = term.weight > 0.0 ? 1 : -1;
      if (sign == 0) sign = s;
      if (s != sign) {
        throw VerificationError(
            "constraint-derived pair weights do not share one sign");
      }
    }
  }
  for (const auto& term : model.constraint_fields) {
    check_site(term.site, "constraint field");
  }
  for (const auto& term : model.z_fields) check_site(term.site, "z field");
  for (const auto& term : model.x_fields) check_site(term.site, "x field");
  for (int id : model.ancilla_ids) check_site(id, "ancilla id");
}

double model_energy(const TwoBodyModel& model, std::uint32_t config) {
  double energy = 0.0;
  for (const auto& term : model.pair_terms) {
    energy += term.weight * spin_of_bit(config, term.a) *
              spin_of_bit(config, term.b);
  }
  for (const auto& term : model.constraint_fields) {
    energy += term.weight * spin_of_bit(config, term.site);
  }
  for (const auto& term : model.z_fields) {
    energy += term.weight * spin_of_bit(config, term.site);
  }
  return energy;
}

}  // namespace pqa
