#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "netauction/fuzzer.hpp"
#include "netauction/mechanisms.hpp"
#include "netauction/model.hpp"

namespace netauction {

using AnyInstance = std::variant<HomogeneousInstance, HeterogeneousInstance, ForwardInstance>;

// Malformed input, with a 1-based position in the source text.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);
  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

AnyInstance parse_instance(std::string_view text);
// Reads and parses a file; an unreadable file is reported as a ParseError at 0:0.
AnyInstance load_instance(const std::string& path);
std::string serialize_instance(const AnyInstance& instance);

InstanceVariant variant_of(const AnyInstance& instance);

using NameLookup = std::function<std::string(AgentId)>;
std::string witness_to_json(const DeviationWitness& witness, const NameLookup& name_of);

}  // namespace netauction
