#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wittkit/algebra.hpp"
#include "wittkit/membership.hpp"
#include "wittkit/towers.hpp"

namespace wittkit {

struct PIdealWitness {
  std::vector<PolyElement> generators;
  bool found = false;
  int m = 0;              ///< smallest m with I^m in (p), when found
  int searched_up_to = 0; ///< products beyond the degree cap are not tested
  std::vector<MembershipCertificate> certificates;
};

/// Smallest m <= m_max with every m-fold product of generators in (p).
PIdealWitness is_p_ideal(const std::vector<PolyElement>& gens, int m_max);

enum class DefectVerdict { Zero, AlmostZeroAtScale, NotAlmostZero };
const char* to_string(DefectVerdict v);

/// Element pi_e of a p-ideal (pi_e) used to probe almost-zero modules.
struct Killer {
  int level = 0;
  PolyElement element;
};

/// Submodule spanned by `basis` inside A / (relations + window).
struct SubquotientModule {
  std::vector<PolyElement> basis;
  std::vector<PolyElement> relations;
  std::vector<linalg::Vec> window;
};

struct DefectReport {
  std::vector<PolyElement> colon_basis;
  std::map<int, bool> killers;
  DefectVerdict verdict = DefectVerdict::Zero;
  std::string witness;  ///< failing killer or surviving element
  std::optional<bool> transfer_verified;
  bool monotone() const;
};

DefectReport almost_zero_defect(const SubquotientModule& M, const std::vector<Killer>& killers);

/// pi_1, ..., pi_n of the tower, inside B.A.
std::vector<Killer> tower_killers(const TowerLevel& B);

/// (p, x2, ..., xd) for valuation/unramified levels, (t1, ..., td) for ramified.
std::vector<PolyElement> canonical_sop(const TowerLevel& B);

/// Multipliers t_m of the transfer argument: t_m t_n kills the colon module
/// of C modulo (x_1, ..., x_i) for all pairs.
struct TransferData {
  std::vector<PolyElement> multipliers;
};

/// ((x_1..x_i) : x_{i+1}) / (x_1..x_i) with 0-based i, probed by `killers`.
DefectReport colon_defect(const std::vector<PolyElement>& sop, int i, const std::vector<Killer>& killers,
                          const TransferData* transfer = nullptr);
DefectReport colon_defect(const TowerLevel& B, const std::vector<PolyElement>& sop, int i,
                          const TransferData* transfer = nullptr);

}  // namespace wittkit
