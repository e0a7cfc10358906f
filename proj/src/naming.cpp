#include <array>
#include <string>
#include <utility>

#include "relmech/dynamics.hpp"
#include "relmech/error.hpp"
#include "relmech/kinematics.hpp"

namespace relmech {

namespace {

constexpr std::array<std::pair<LagrangianRegime, std::string_view>, 5> kRegimes{{
    {LagrangianRegime::Relativistic, "relativistic"},
    {LagrangianRegime::Effective, "effective"},
    {LagrangianRegime::SemiRelativistic, "semi_relativistic"},
    {LagrangianRegime::SemiRelativisticFull, "semi_relativistic_full"},
    {LagrangianRegime::Classical, "classical"},
}};

constexpr std::array<std::pair<EomForm, std::string_view>, 8> kForms{{
    {EomForm::RelativisticCoordTime, "relativistic_coord_time"},
    {EomForm::RelativisticProperTime, "relativistic_proper_time"},
    {EomForm::Covariant, "covariant"},
    {EomForm::SemiRelativistic, "semi_relativistic"},
    {EomForm::SemiRelativisticLowV, "semi_relativistic_low_v"},
    {EomForm::Classical, "classical"},
    {EomForm::HamiltonianExact, "hamiltonian_exact"},
    {EomForm::HamiltonianWeak, "hamiltonian_weak"},
}};

template <typename Table>
std::string choices(const Table& table) {
  std::string out;
  for (const auto& [value, name] : table) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

}  // namespace

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::SingularPoint: return "singular-point";
    case ErrorKind::SpeedLimitExceeded: return "speed-limit-exceeded";
    case ErrorKind::InsideHorizon: return "inside-horizon";
    case ErrorKind::SuperluminalFrame: return "superluminal-frame";
    case ErrorKind::AnchorMismatch: return "anchor-mismatch";
    case ErrorKind::Horizon: return "horizon";
    case ErrorKind::NotAPotential: return "not-a-potential";
    case ErrorKind::BranchPoint: return "branch-point";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::NoRealAlpha: return "no-real-alpha";
    case ErrorKind::IntegratingFactor: return "integrating-factor";
    case ErrorKind::DegenerateParameter: return "degenerate-parameter";
    case ErrorKind::Stiffness: return "stiffness";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

std::string_view to_string(LagrangianRegime regime) noexcept {
  for (const auto& [value, name] : kRegimes)
    if (value == regime) return name;
  return "unknown";
}

LagrangianRegime parse_regime(std::string_view name) {
  for (const auto& [value, label] : kRegimes)
    if (label == name) return value;
  fail(ErrorKind::Config, "unknown regime '" + std::string(name) + "' (expected one of " + choices(kRegimes) + ")");
}

std::string_view to_string(EomForm form) noexcept {
  for (const auto& [value, name] : kForms)
    if (value == form) return name;
  return "unknown";
}

EomForm parse_form(std::string_view name) {
  for (const auto& [value, label] : kForms)
    if (label == name) return value;
  fail(ErrorKind::Config, "unknown form '" + std::string(name) + "' (expected one of " + choices(kForms) + ")");
}

}  // namespace relmech
