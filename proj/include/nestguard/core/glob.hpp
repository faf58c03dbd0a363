// Copyright 2026 The NestGuard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NESTGUARD_CORE_GLOB_HPP
#define NESTGUARD_CORE_GLOB_HPP

#include <string_view>

namespace nestguard {

// Matches a '/'-separated relative path against a glob. `*` and `?` stay
// within one path segment, `[abc]`/`[!a-z]` are character classes and a
// `**` segment matches zero or more whole segments.
bool glob_match(std::string_view pattern, std::string_view path);

}  // namespace nestguard

#endif  // NESTGUARD_CORE_GLOB_HPP
