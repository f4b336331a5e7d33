/* Copyright 2026 The Polyseg Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef POLYSEG_ENCODING_HPP_
#define POLYSEG_ENCODING_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace polyseg {

// Standard base64 with padding (RFC 4648), used for PNG payloads on the
// adapter wire.
std::string base64_encode(const std::uint8_t* data, std::size_t size);
std::string base64_encode(const std::vector<std::uint8_t>& data);
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace polyseg

#endif  // POLYSEG_ENCODING_HPP_
