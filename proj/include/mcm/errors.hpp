#pragma once

#include <stdexcept>
#include <string>

namespace mcm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define MCM_DEFINE_ERROR(Name)                    \
  struct Name : Error {                           \
    explicit Name(const std::string& msg = #Name) \
        : Error(std::string(#Name) + ": " + msg) {} \
  }

MCM_DEFINE_ERROR(RingMismatch);
MCM_DEFINE_ERROR(DivisionNotExact);
MCM_DEFINE_ERROR(InvalidGrade);
MCM_DEFINE_ERROR(NotHomogeneous);
MCM_DEFINE_ERROR(ArityError);
MCM_DEFINE_ERROR(InvalidConfig);
MCM_DEFINE_ERROR(ModeError);
MCM_DEFINE_ERROR(InvalidSelection);
MCM_DEFINE_ERROR(ShapeError);
MCM_DEFINE_ERROR(SamplingFailed);
MCM_DEFINE_ERROR(BudgetExceeded);
MCM_DEFINE_ERROR(CharacteristicTooSmall);
MCM_DEFINE_ERROR(PivotRejected);
MCM_DEFINE_ERROR(ParseError);

#undef MCM_DEFINE_ERROR

} // namespace mcm
