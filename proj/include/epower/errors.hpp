#pragma once

#include <stdexcept>
#include <string>

namespace epower {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidShape : Error { using Error::Error; };
struct InvalidCut : Error { using Error::Error; };
struct InvalidDimension : Error { using Error::Error; };
struct InvalidRank : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct NumericalFailure : Error { using Error::Error; };
struct InternalInconsistency : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct ConstructionFailed : Error { using Error::Error; };
struct ZeroSlice : Error { using Error::Error; };
struct NotUnitary : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

} // namespace epower
