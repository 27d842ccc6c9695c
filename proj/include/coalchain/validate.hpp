#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "coalchain/model.hpp"

namespace coalchain {

enum class ViolationKind : std::uint8_t {
  RailCapacity,
  InboundCapacity,
  StackerCapacity,
  OutboundCapacity,
  Berths,
  ShipLoaders,
  PadOverlap,
  PadBounds,
  ReclaimerTravel,
  ReclaimerPassing,
  ReclaimBeforeBuilt,
  ReclaimOrder,
  LoadingPause,
  ReclaimDuration,
  Channel,
  TidalWindow,
  BuildWindow,
  Tonnage,
  VesselTiming,
};

std::string_view to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::string message;
};

/// Outcome of checking a solution against an instance. Structural problems
/// (wrong sizes, dangling indices, missing KCT placements) are reported
/// separately; when any exist the constraint checks are skipped.
struct ValidationReport {
  std::vector<std::string> structural;
  std::vector<int> unscheduled_vessels;
  std::vector<Violation> violations;

  bool clean() const {
    return structural.empty() && unscheduled_vessels.empty() && violations.empty();
  }
  std::size_t count(ViolationKind k) const;
};

/// Rechecks every operational rule from the instance and the solution alone.
ValidationReport validate(const Instance& inst, const Solution& sol);

}  // namespace coalchain
