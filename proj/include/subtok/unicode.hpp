// Copyright 2026 The subtok Authors
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

#ifndef SUBTOK_UNICODE_HPP_
#define SUBTOK_UNICODE_HPP_

#include <string>
#include <string_view>

namespace subtok {

// Decodes UTF-8 into Unicode scalar values. Throws ParseError on invalid
// input (truncated sequences, overlong encodings, surrogates), reporting the
// byte offset of the offending sequence.
std::u32string DecodeUtf8(std::string_view text);

std::string EncodeUtf8(std::u32string_view chars);

// Appends the UTF-8 encoding of a single scalar value.
void AppendUtf8(char32_t c, std::string* out);

}  // namespace subtok

#endif  // SUBTOK_UNICODE_HPP_
