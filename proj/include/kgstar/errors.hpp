#pragma once

#include <stdexcept>
#include <string>

namespace kgstar {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define KGSTAR_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                     \
    public:                                                         \
        explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
    }

// network
KGSTAR_DEFINE_ERROR(BranchCountTooSmall);
KGSTAR_DEFINE_ERROR(NonPositiveSpeed);
KGSTAR_DEFINE_ERROR(UnsortedPotentials);
KGSTAR_DEFINE_ERROR(NegativePotential);
KGSTAR_DEFINE_ERROR(BandIndexOutOfRange);

// spectral
KGSTAR_DEFINE_ERROR(AtThreshold);

// transform
KGSTAR_DEFINE_ERROR(ThresholdOnGrid);

// initial data
KGSTAR_DEFINE_ERROR(EmptyInterval);
KGSTAR_DEFINE_ERROR(ComponentIndexTooLarge);
KGSTAR_DEFINE_ERROR(BumpOutsideBand);

// propagator
KGSTAR_DEFINE_ERROR(BranchHypothesisViolated);
KGSTAR_DEFINE_ERROR(BudgetExceeded);

// asymptotics
KGSTAR_DEFINE_ERROR(OutsideLightCone);
KGSTAR_DEFINE_ERROR(OutsideCone);
KGSTAR_DEFINE_ERROR(BandViolation);
KGSTAR_DEFINE_ERROR(ParameterViolation);

// analysis
KGSTAR_DEFINE_ERROR(NonPositiveSample);

// cli
KGSTAR_DEFINE_ERROR(ParseError);
KGSTAR_DEFINE_ERROR(ValidationError);

#undef KGSTAR_DEFINE_ERROR

} // namespace kgstar
