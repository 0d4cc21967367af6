#pragma once

#include <stdexcept>
#include <string>

namespace floodpulse {

/// Base of every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidParameter : Error { using Error::Error; };
struct InvalidRange : Error { using Error::Error; };

// geometry
struct DegeneratePolygon : Error { using Error::Error; };
struct DegenerateHull : Error { using Error::Error; };
struct EmptyLayer : Error { using Error::Error; };
struct NoElevationCoverage : Error { using Error::Error; };
struct NoPopulationCoverage : Error { using Error::Error; };

// series / stores
struct EmptySeries : Error { using Error::Error; };
struct NoAntennaCoverage : Error { using Error::Error; };
struct UnknownLanguage : Error { using Error::Error; };
struct NoStations : Error { using Error::Error; };

// state machine
struct InvalidTransition : Error { using Error::Error; };

// input handling
struct MissingInput : Error { using Error::Error; };
struct CorruptInput : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace floodpulse
