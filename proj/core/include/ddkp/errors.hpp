#pragma once

#include <stdexcept>

namespace ddkp {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Series or product did not converge within the term cap.
class TruncationExceeded : public Error { public: using Error::Error; };
// Argument within the guard radius of a zero of the relevant theta function.
class NearPole : public Error { public: using Error::Error; };
// Branched-log continuation path meets (or ends on) a zero of theta_1/theta_4.
class BranchCrossing : public Error { public: using Error::Error; };
// Pair of points degenerate for the requested relation.
class DegeneratePair : public Error { public: using Error::Error; };
// Parameter outside the supported domain.
class OutOfRange : public Error { public: using Error::Error; };
// Iteration failed to converge.
class NoConvergence : public Error { public: using Error::Error; };
// Root bracket does not change sign, or the objective is degenerate.
class NoSignChange : public Error { public: using Error::Error; };
// An integrator stage point violated a pole guard while the base point is fine.
class StepTooLarge : public Error { public: using Error::Error; };
// Division by a vanishing denominator (e.g. S'(u0) = 0).
class ZeroDenominator : public Error { public: using Error::Error; };
// Truncated series of incompatible orders.
class OrderMismatch : public Error { public: using Error::Error; };
// Invalid argument or configuration.
class InvalidArgument : public Error { public: using Error::Error; };
// An internal closed-form cross-check failed; indicates a bug or precision loss.
class CrossCheckFailure : public Error { public: using Error::Error; };

} // namespace ddkp
