// Copyright 2026 The mimsi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mimsi {

using Rng = std::mt19937_64;

/// One splitmix64 step; a good bijective mixer for deriving seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed derived from a master seed and a list of stream ids. Distinct id
/// lists give statistically independent streams.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> ids);

Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> ids = {});

}  // namespace mimsi
