#include "netsub/solver.hpp"

#include <string>

namespace netsub {

Variant parse_variant(std::string_view name) {
  if (name == "pre_mix" || name == "premix") return Variant::pre_mix;
  if (name == "projected_pre_mix" || name == "projected_premix") return Variant::projected_pre_mix;
  if (name == "mix_after_project" || name == "mixafterproject") return Variant::mix_after_project;
  if (name == "centralized") return Variant::centralized;
  throw InvalidArgument("unknown variant '" + std::string(name) + "'");
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::pre_mix: return "pre_mix";
    case Variant::projected_pre_mix: return "projected_pre_mix";
    case Variant::mix_after_project: return "mix_after_project";
    case Variant::centralized: return "centralized";
  }
  return "?";
}

WindowRule parse_window_rule(std::string_view name) {
  if (name == "full") return WindowRule::full;
  if (name == "half") return WindowRule::half;
  if (name == "dyadic") return WindowRule::dyadic;
  throw InvalidArgument("unknown window rule '" + std::string(name) + "'");
}

std::string_view to_string(WindowRule w) {
  switch (w) {
    case WindowRule::full: return "full";
    case WindowRule::half: return "half";
    case WindowRule::dyadic: return "dyadic";
  }
  return "?";
}

}  // namespace netsub
