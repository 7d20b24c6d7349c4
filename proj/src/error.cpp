#include "macwt/error.hpp"

namespace macwt {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::NonStochastic: return "NonStochastic";
    case ErrorCode::NegativeProbability: return "NegativeProbability";
    case ErrorCode::EmptyAlphabet: return "EmptyAlphabet";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::UnknownAxis: return "UnknownAxis";
    case ErrorCode::OverlappingAxes: return "OverlappingAxes";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::NoPositiveSecrecyRate: return "NoPositiveSecrecyRate";
    case ErrorCode::InvalidSlot: return "InvalidSlot";
    case ErrorCode::WeightMismatch: return "WeightMismatch";
    case ErrorCode::SizeOverflow: return "SizeOverflow";
    case ErrorCode::WidthMismatch: return "WidthMismatch";
    case ErrorCode::KeyTooShort: return "KeyTooShort";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::KeyDeficit: return "KeyDeficit";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace macwt
