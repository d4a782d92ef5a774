#include "codeeff/error.hpp"

namespace codeeff {

SchemaError::SchemaError(std::string record_id, std::string field, const std::string& detail)
    : Error("record '" + record_id + "': field '" + field + "': " + detail),
      record_id_(std::move(record_id)),
      field_(std::move(field)) {}

}  // namespace codeeff
