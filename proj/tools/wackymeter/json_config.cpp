// Copyright 2026-present the wackymeter project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "json_config.hpp"

#include <nlohmann/json.hpp>

namespace wackymeter::cli {

namespace {

using nlohmann::json;

std::string scalar_text(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_number()) return value.dump();
  throw CLI::ConversionError("config values must be strings, numbers, booleans or arrays");
}

void collect(const json& obj, std::vector<std::string> parents,
             std::vector<CLI::ConfigItem>& items) {
  for (const auto& [key, value] : obj.items()) {
    if (parents.empty() && key == "version") continue;
    if (value.is_object()) {
      auto nested = parents;
      nested.push_back(key);
      collect(value, nested, items);
      continue;
    }
    CLI::ConfigItem item;
    item.parents = parents;
    item.name = key;
    if (value.is_array()) {
      for (const auto& v : value) item.inputs.push_back(scalar_text(v));
    } else {
      item.inputs.push_back(scalar_text(value));
    }
    items.push_back(std::move(item));
  }
}

json snapshot(const CLI::App* app, bool default_also) {
  json out = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (!opt->get_configurable() || opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (opt->count() > 0) {
      const auto& results = opt->results();
      out[name] = results.size() == 1 ? json(results.front()) : json(results);
    } else if (default_also && !opt->get_default_str().empty()) {
      out[name] = opt->get_default_str();
    }
  }
  for (const CLI::App* sub : app->get_subcommands({})) {
    json nested = snapshot(sub, default_also);
    if (!nested.empty()) out[sub->get_name()] = std::move(nested);
  }
  return out;
}

}  // namespace

std::string JsonConfig::to_config(const CLI::App* app, bool default_also, bool,
                                  std::string) const {
  json out = snapshot(app, default_also);
  out["version"] = kConfigVersion;
  return out.dump(2) + "\n";
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream& input) const {
  json root;
  try {
    root = json::parse(input);
  } catch (const json::parse_error& e) {
    throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
  auto version = root.find("version");
  if (version == root.end() || !version->is_number_integer() ||
      version->get<int>() != kConfigVersion) {
    throw CLI::ConversionError("config file must declare \"version\": 1");
  }
  std::vector<CLI::ConfigItem> items;
  collect(root, {}, items);
  return items;
}

}  // namespace wackymeter::cli
