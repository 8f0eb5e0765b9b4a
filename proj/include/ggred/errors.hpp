#pragma once

#include <stdexcept>
#include <string>

namespace ggred {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define GGRED_DEFINE_ERROR(Name)              \
    struct Name : Error {                     \
        using Error::Error;                   \
    }

GGRED_DEFINE_ERROR(DomainError);
GGRED_DEFINE_ERROR(EvaluationError);
GGRED_DEFINE_ERROR(SingularMetricError);
GGRED_DEFINE_ERROR(DegreeError);
GGRED_DEFINE_ERROR(RankError);
GGRED_DEFINE_ERROR(LiftError);
GGRED_DEFINE_ERROR(TangencyError);
GGRED_DEFINE_ERROR(ReductionConditionError);
GGRED_DEFINE_ERROR(UnknownGeneratorError);
GGRED_DEFINE_ERROR(OddDimensionError);
GGRED_DEFINE_ERROR(AsymmetryError);
GGRED_DEFINE_ERROR(SingularBodyError);
GGRED_DEFINE_ERROR(FrameMismatchError);
GGRED_DEFINE_ERROR(ConfigError);
GGRED_DEFINE_ERROR(ScenarioError);

#undef GGRED_DEFINE_ERROR

}  // namespace ggred
