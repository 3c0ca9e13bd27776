#include "hexdimer/scenario.hpp"

#include <sstream>

namespace hexdimer {

ScenarioKind kind_of(const Scenario& s) {
  switch (s.index()) {
    case 0:
      return ScenarioKind::kFinite;
    case 1:
      return ScenarioKind::kInfinite;
    default:
      return ScenarioKind::kSliced;
  }
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kFinite:
      return "finite";
    case ScenarioKind::kInfinite:
      return "infinite";
    case ScenarioKind::kSliced:
      return "sliced";
  }
  return "unknown";
}

std::string describe(const Scenario& s) {
  std::ostringstream os;
  os.precision(17);
  if (const auto* f = std::get_if<FiniteBox>(&s)) {
    os << "finite a=" << f->a << " b=" << f->b << " c=" << f->c;
  } else if (const auto* i = std::get_if<InfiniteBox>(&s)) {
    os << "infinite a=" << i->a << " b=" << i->b;
  } else {
    const auto& sl = std::get<SlicedBox>(s);
    os << "sliced a=" << sl.a << " b=" << sl.b << " phi=" << (sl.phi ? sl.phi->describe() : "none");
  }
  return os.str();
}

double free_energy_sign(ScenarioKind kind) { return kind == ScenarioKind::kFinite ? -1.0 : 1.0; }

std::string sign_convention_note() {
  return "finite: f=-lnZ/(2(MN+NK+MK)), f2=-1/(24(ab+bc+ca)); "
         "infinite,sliced: f=+lnZ/(MN), f2=+1/(12ab); "
         "f3 is the eps^2 coefficient of f=f0+f1*eps+f2*eps^2*ln(eps)+f3*eps^2";
}

}  // namespace hexdimer
