#ifndef FACETLAB_COMMON_HPP
#define FACETLAB_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace facetlab {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;
// Edge costs and distances in scaled integer units (true cost times graph scale).
using Cost = std::int64_t;

inline constexpr EdgeId kNoEdge = -1;
inline constexpr VertexId kNoVertex = -1;

#define FACETLAB_ERROR(Name)                                       \
  class Name : public std::runtime_error {                         \
   public:                                                         \
    explicit Name(const std::string& what) : std::runtime_error(what) {} \
  }

FACETLAB_ERROR(PolicyCycle);
FACETLAB_ERROR(NegativeCycle);
FACETLAB_ERROR(DisconnectedVertex);
FACETLAB_ERROR(NotAnEdge);
FACETLAB_ERROR(InvalidGraph);
FACETLAB_ERROR(InvalidStart);
FACETLAB_ERROR(SingularBasis);
FACETLAB_ERROR(Unbounded);
FACETLAB_ERROR(Degenerate);
FACETLAB_ERROR(PreconditionViolation);
FACETLAB_ERROR(NotFunctional);
FACETLAB_ERROR(ParameterOverflow);
FACETLAB_ERROR(BadConfig);
FACETLAB_ERROR(IOFailure);
FACETLAB_ERROR(UnknownCheck);
// Raised when a run breaks a property that must hold for every pivot
// (for example a switch that does not decrease the objective).
FACETLAB_ERROR(InvariantViolation);

#undef FACETLAB_ERROR

}  // namespace facetlab

#endif
