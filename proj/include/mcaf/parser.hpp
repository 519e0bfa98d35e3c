// Copyright (C) 2026 The mcaf Authors.
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

#include <string>
#include <vector>

#include "mcaf/ast.hpp"

namespace mcaf {

// Parses the first function definition in `text`.
//
// Supported C subset: function definitions over scalar builtin types,
// declarations with optional initializers, assignments, calls, if/else,
// while, for, return, integer/string/char literals, the usual arithmetic,
// comparison and logical operators, unary !/-/& (address-of). Line and
// block comments are skipped. Anything else raises UnsupportedConstruct
// or SyntaxError; an input with no function raises EmptyInput.
//
// Tree shape: METHOD children are [Parameter..., Block, MethodReturn]
// with MethodReturn (wrapping a TypeFullName leaf) pinned last, so the
// return type is the rightmost leaf. The function name is recorded as
// Ast::function_name, not as a tree node. Node ids are preorder.
Ast parse_source(const std::string& text);

// Parses every function definition in `text`, in source order.
std::vector<Ast> parse_functions(const std::string& text);

}  // namespace mcaf
