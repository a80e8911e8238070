/**
 * Copyright 2026, The diffscope Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy of
 * the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations under
 * the License.
 */


#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace diffscope {

struct CatalogEntry {
  std::string name;
  std::string summary;
  std::string parameters;  // "k=default, ..." or empty
};

const std::vector<CatalogEntry>& catalog_entries();

// Expands `name` or `name(k=v, ...)` to a full model document. Unknown names
// raise UnknownModel with the closest catalog name as a suggestion.
nlohmann::json catalog_lookup(std::string_view name);

}  // namespace diffscope
