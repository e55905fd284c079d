#pragma once

#include <functional>

#include "posikit/field.hpp"
#include "posikit/operators.hpp"

namespace posikit {

using FieldMap = std::function<Field(const Field&)>;

/// Preconditioned conjugate gradients in the discrete inner product of `g`.
/// `op` must be self-adjoint and positive definite in that inner product, and
/// `precond` an SPD approximation of its inverse. `x` holds the initial guess
/// on entry and the solution on exit.
SolverReport conjugate_gradient(const FieldMap& op, const FieldMap& precond, const Field& rhs,
                                Field& x, const Grid& g, const SolverSettings& settings);

/// Right-preconditioned restarted GMRES in the discrete inner product of `g`.
SolverReport gmres(const FieldMap& op, const FieldMap& precond, const Field& rhs, Field& x,
                   const Grid& g, const SolverSettings& settings);

}  // namespace posikit
