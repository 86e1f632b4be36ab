#include "lipeval/error.hpp"

namespace lipeval {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::MissingColumn: return "MissingColumn";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::UnknownLabel: return "UnknownLabel";
    case Errc::EmptyText: return "EmptyText";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::UnknownId: return "UnknownId";
    case Errc::MissingId: return "MissingId";
    case Errc::InvalidMapping: return "InvalidMapping";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::MalformedFloat: return "MalformedFloat";
    case Errc::MissingEmbedding: return "MissingEmbedding";
    case Errc::DegenerateLabels: return "DegenerateLabels";
    case Errc::NonFiniteLoss: return "NonFiniteLoss";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::DegenerateTable: return "DegenerateTable";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::MalformedModel: return "MalformedModel";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace lipeval
