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
#pragma once

#include <cstddef>
#include <string>

#include "wackymeter/types.hpp"

namespace wackymeter {

// A model's ranking function over a fixed collection. Implementations must
// return at most k entries in canonical ranking order and be safe to call
// concurrently.
class Retriever {
 public:
  virtual ~Retriever() = default;
  virtual Ranking search(const SparseVector& query, std::size_t k) const = 0;
  virtual std::string name() const = 0;
};

}  // namespace wackymeter
