#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lipeval {

enum class Errc {
  MissingColumn,
  DuplicateId,
  UnknownLabel,
  EmptyText,
  MalformedRow,
  UnknownId,
  MissingId,
  InvalidMapping,
  EmptyCorpus,
  DimMismatch,
  MalformedFloat,
  MissingEmbedding,
  DegenerateLabels,
  NonFiniteLoss,
  DimensionMismatch,
  EmptyInput,
  SchemaMismatch,
  DegenerateTable,
  InvalidArgument,
  MalformedModel,
  InvalidConfig,
  Io,
};

std::string_view to_string(Errc code);

/// Every data or validation failure in the library surfaces as an Error.
/// The code identifies the failure class; what() carries the detail
/// (offending id, line number, field name).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace lipeval
