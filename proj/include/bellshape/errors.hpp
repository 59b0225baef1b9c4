#pragma once

#include <stdexcept>
#include <string>

namespace bellshape {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// exact layer
struct NonRepresentablePoint : Error { using Error::Error; };
struct PrecisionExhausted : Error { using Error::Error; };
struct PoleOnRealLine : Error { using Error::Error; };

// representation layer
struct LevelCrossingViolated : Error { using Error::Error; };
struct NotExpRepresentable : Error { using Error::Error; };
struct DivergentLaplace : Error { using Error::Error; };
struct DivergentRepresentation : Error { using Error::Error; };
struct PoleHit : Error { using Error::Error; };
struct UnsupportedAnalyticPiece : Error { using Error::Error; };

// numeric layer
struct ToleranceNotMet : Error { using Error::Error; };
struct NonIntegrable : Error { using Error::Error; };
struct InvalidIndex : Error { using Error::Error; };
struct UnsupportedFractionalPower : Error { using Error::Error; };

struct BadInput : Error { using Error::Error; };

} // namespace bellshape
