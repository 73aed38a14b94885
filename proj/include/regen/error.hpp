#pragma once

#include <stdexcept>
#include <string>

namespace regen {

// Root of every failure raised by the library. Callers that only need to
// distinguish "our" errors from std ones can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error { public: using Error::Error; };
class NonNormalizedModel : public Error { public: using Error::Error; };
class QuadratureFailure : public Error { public: using Error::Error; };
class DerivativeUnderflow : public Error { public: using Error::Error; };
class TruncationBudgetExceeded : public Error { public: using Error::Error; };
class InverseTailFailure : public Error { public: using Error::Error; };
class HorizonTooShort : public Error { public: using Error::Error; };
class BadIntensity : public Error { public: using Error::Error; };
class UnsortedInput : public Error { public: using Error::Error; };
class PotentialMeasureUnavailable : public Error { public: using Error::Error; };
class BadGrid : public Error { public: using Error::Error; };
class IndeterminateRegime : public Error { public: using Error::Error; };
class TooFewSamples : public Error { public: using Error::Error; };
class IOError : public Error { public: using Error::Error; };
class ConfigError : public Error { public: using Error::Error; };

}  // namespace regen
