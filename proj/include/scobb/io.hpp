// Instance files: canonical JSON (sorted keys, floats at 17 significant
// digits) holding either liquidation parameters or a general QCQP payload,
// plus generator provenance. load(save(x)) == x.
#pragma once

#include "scobb/liquidation.hpp"
#include "scobb/types.hpp"

#include <map>
#include <optional>
#include <string>

namespace scobb {

struct InstanceFile {
  std::string schema_version = "1";
  std::optional<LiquidationParams> liquidation;
  std::optional<QcqpInstance> general;
  std::map<std::string, std::string> provenance;

  /// The solvable QCQP: builds from liquidation parameters when present.
  QcqpInstance to_qcqp() const;
};

std::string serialize_instance(const InstanceFile& file);
InstanceFile parse_instance(const std::string& text);

void save_instance(const std::string& path, const InstanceFile& file);
InstanceFile load_instance(const std::string& path);

}  // namespace scobb
